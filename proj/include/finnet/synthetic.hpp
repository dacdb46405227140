#pragma once

#include "finnet/market_data.hpp"

#include <cstdint>
#include <vector>

namespace finnet {

/// Contiguous run of days with scaled return magnitudes (1-based, closed).
struct VolRegime {
    int t_start = 1;
    int t_end = 1;
    double vol_multiplier = 1.0;
};

/// Recipe for a synthetic factor-model market.
/// Raw returns: R_i(t) = v(t) * (beta * m(t) + gamma * s_{g(i)}(t) + sigma * eps_i(t))
/// with independent standard Gaussian factors and v(t) the regime multiplier.
struct MarketSpec {
    int n_stocks = 50;
    int n_days = 1000;               // number of return steps T; panel has T+1 dates
    double market_beta = 1.0;
    int n_sectors = 1;
    double sector_gamma = 0.0;
    double noise_sigma = 1.0;
    std::vector<VolRegime> regimes;  // non-overlapping, within [1, n_days]
    std::uint64_t seed = 0;

    void validate() const;

    /// Sector index of stock i: contiguous near-equal blocks.
    int sector_of(int stock) const { return stock * n_sectors / n_stocks; }
};

/// Single-letter sector code for sector index s (A, B, C, ...).
std::string sector_code(int s);

/// Deterministic panel: prices reconstructed from P_i(0) = 1, with sector
/// labels attached. Randomness is keyed per (seed, stream, day), so the
/// output is a pure function of the spec at any parallelism.
PricePanel generate_panel(const MarketSpec& spec);

/// Panel plus the calm/volatile window annotations downstream tests consume.
struct RegimePanel {
    PricePanel panel;
    std::vector<VolRegime> windows;   // echoed from the spec
};

RegimePanel regime_calm_vs_volatile(const MarketSpec& spec);

} // namespace finnet
