#pragma once

#include <optional>
#include <utility>
#include <vector>

namespace finnet {

/// Two-segment log-log fit around a crossover scale.
struct CrossoverFit {
    int t_c = 0;                // breakpoint scale
    double theta_below = 0.0;   // slope for t <= t_c
    double theta_above = 0.0;   // slope for t > t_c
    double sse_gain = 0.0;      // (single-fit SSE - two-fit SSE) / single-fit SSE
};

/// Log-log line fit over a scale range.
struct ExponentFit {
    double theta = 0.0;
    double intercept = 0.0;     // log F at log t = 0
    int points_used = 0;
    int zeros_excluded = 0;     // F(t) = 0 points dropped from the fit
};

struct DfaResult {
    std::vector<int> scales;            // strictly increasing, within [4, T/4]
    std::vector<double> fluctuations;   // F(t) >= 0, same length
    double theta = 0.0;
    std::pair<int, int> fit_range{0, 0};        // [t_lo, t_hi] in scale units
    std::optional<CrossoverFit> crossover;
    double gap_fraction = 0.0;          // fraction of filled-in entries, if any
};

/// Profile B(t') = cumulative sum of (A - mean). Requires length >= 16.
std::vector<double> dfa_profile(const std::vector<double>& series);

/// Default log-spaced grid of ~20 unique integer scales in [4, T/4];
/// a pure function of T.
std::vector<int> default_scale_grid(int series_length);

/// F(t) per scale: tile [1, T'] with windows of size t (T' = floor(T/t)*t,
/// remainder discarded), detrend each window linearly, RMS over [1, T'].
std::vector<double> fluctuation_function(const std::vector<double>& profile,
                                         const std::vector<int>& scales);

/// Least-squares slope of log F vs log t over scales in [t_lo, t_hi].
/// Zero-F points are excluded; fewer than 4 usable points is an error.
ExponentFit fit_exponent(const std::vector<int>& scales, const std::vector<double>& fluctuations,
                         int t_lo, int t_hi);

/// Scan interior scales as breakpoints of a continuous two-segment log-log
/// fit; report the best one when it reduces SSE by at least 20% over the
/// single-line fit, otherwise absent. Needs >= 8 positive points spanning
/// at least one decade.
std::optional<CrossoverFit> fit_crossover(const std::vector<int>& scales,
                                          const std::vector<double>& fluctuations);

/// Mean-fill absent entries; errors when more than 10% of entries are absent.
struct GapFill {
    std::vector<double> values;
    double gap_fraction = 0.0;
};
GapFill fill_gaps(const std::vector<std::optional<double>>& series);

struct DfaOptions {
    std::optional<std::pair<int, int>> fit_range;  // defaults to grid minus 2 scales each end
    bool want_crossover = false;
};

/// Full analysis of one series: profile, default grid, F, exponent fit, and
/// (when requested) the crossover scan.
DfaResult analyze_series(const std::vector<double>& series, const DfaOptions& options = {});
DfaResult analyze_series(const std::vector<std::optional<double>>& series,
                         const DfaOptions& options = {});

} // namespace finnet
