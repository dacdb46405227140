#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace finnet {

// ---------------------------------------------------------------------------
// Counter-based randomness. Every draw is a pure function of (seed, stream,
// counter), so parallel generation is deterministic and order-independent.
// ---------------------------------------------------------------------------

/// SplitMix64 finalizer; full-avalanche mix of a 64-bit word.
std::uint64_t mix64(std::uint64_t x);

/// Keyed counter mix: combine (seed, stream, counter) into one 64-bit word.
std::uint64_t keyed_mix(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter);

/// Uniform double in (0, 1], derived from a mixed 64-bit word.
double uniform01(std::uint64_t word);

/// Standard normal via Box-Muller on two keyed uniforms.
double keyed_gaussian(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter);

/// Uniform double in [lo, hi).
double keyed_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter,
                     double lo, double hi);

/// Small sequential PRNG for tests and shuffling; deterministic per seed.
class SplitMix {
public:
    explicit SplitMix(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next();
    double next_uniform();            // [0, 1)
    double next_gaussian();           // standard normal, Box-Muller pair cache
    int next_int(int lo, int hi);     // inclusive range

private:
    std::uint64_t state_;
    bool has_cached_ = false;
    double cached_ = 0.0;
};

// ---------------------------------------------------------------------------
// Parallel helpers. Work is split into contiguous chunks; every item writes
// only to its own output slot, so results do not depend on the worker count.
// ---------------------------------------------------------------------------

/// Run fn(i) for i in [0, n) on `workers` threads (1 = inline).
void parallel_for(int n, int workers, const std::function<void(int)>& fn);

/// Resolve a worker-count request: 0 means auto (hardware concurrency).
int resolve_workers(int requested);

// ---------------------------------------------------------------------------
// Formatting / hashing / small text utilities.
// ---------------------------------------------------------------------------

/// Shortest decimal form that round-trips the double (up to 17 significant digits).
std::string fmt_double(double v);

/// FNV-1a 64-bit over a byte string.
std::uint64_t fnv1a64(std::string_view bytes);

/// FNV-1a 64-bit of a whole file, rendered as fixed-width hex.
std::string file_checksum_hex(const std::string& path);

/// Split one CSV line on commas; strips a trailing '\r'. No quoting support.
std::vector<std::string> split_csv_line(std::string_view line);

/// Parse a double, rejecting trailing garbage; returns false on failure.
bool parse_double(std::string_view text, double& out);

} // namespace finnet
