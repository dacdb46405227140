#include "finnet/synthetic.hpp"

#include "finnet/common.hpp"
#include "finnet/util.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace finnet {

namespace {

// Stream ids for the keyed generator: market, then sectors, then per-stock noise.
constexpr std::uint64_t kMarketStream = 0;
std::uint64_t sector_stream(int s) { return 1 + static_cast<std::uint64_t>(s); }
std::uint64_t noise_stream(const MarketSpec& spec, int stock) {
    return 1 + static_cast<std::uint64_t>(spec.n_sectors) + static_cast<std::uint64_t>(stock);
}

} // namespace

void MarketSpec::validate() const {
    if (n_stocks < 3) throw ValidationError("n_stocks must be >= 3");
    if (n_days < 2) throw ValidationError("n_days must be >= 2");
    if (!(noise_sigma > 0.0)) throw ValidationError("noise_sigma must be > 0");
    if (!(market_beta >= 0.0) || !std::isfinite(market_beta)) {
        throw ValidationError("market_beta must be finite and >= 0");
    }
    if (!(sector_gamma >= 0.0) || !std::isfinite(sector_gamma)) {
        throw ValidationError("sector_gamma must be finite and >= 0");
    }
    if (n_sectors < 1 || n_sectors > 26 || n_sectors > n_stocks) {
        throw ValidationError("n_sectors must be in [1, min(26, n_stocks)]");
    }
    std::vector<VolRegime> sorted = regimes;
    std::sort(sorted.begin(), sorted.end(),
              [](const VolRegime& a, const VolRegime& b) { return a.t_start < b.t_start; });
    int prev_end = 0;
    for (const auto& r : sorted) {
        if (r.t_start < 1 || r.t_end > n_days || r.t_start > r.t_end) {
            throw ValidationError("regime window [" + std::to_string(r.t_start) + ", " +
                                  std::to_string(r.t_end) + "] outside [1, " +
                                  std::to_string(n_days) + "]");
        }
        if (r.t_start <= prev_end) throw ValidationError("regime windows overlap");
        if (!(r.vol_multiplier > 0.0)) throw ValidationError("vol_multiplier must be > 0");
        prev_end = r.t_end;
    }
}

std::string sector_code(int s) {
    return std::string(1, static_cast<char>('A' + s));
}

PricePanel generate_panel(const MarketSpec& spec) {
    spec.validate();
    const int n = spec.n_stocks;
    const int steps = spec.n_days;

    std::vector<double> vol(steps, 1.0);
    for (const auto& r : spec.regimes) {
        for (int t = r.t_start; t <= r.t_end; ++t) vol[t - 1] = r.vol_multiplier;
    }

    PricePanel panel;
    panel.stock_ids.reserve(n);
    char buf[16];
    for (int i = 0; i < n; ++i) {
        std::snprintf(buf, sizeof(buf), "S%03d", i);
        panel.stock_ids.emplace_back(buf);
        panel.sectors[buf] = sector_code(spec.sector_of(i));
    }
    panel.dates.reserve(steps + 1);
    for (int d = 0; d <= steps; ++d) {
        std::snprintf(buf, sizeof(buf), "d%06d", d);
        panel.dates.emplace_back(buf);
    }

    panel.prices.resize(n, steps + 1);
    for (int i = 0; i < n; ++i) {
        const int g = spec.sector_of(i);
        double price = 1.0;
        panel.prices(i, 0) = price;
        for (int t = 0; t < steps; ++t) {
            const double market = keyed_gaussian(spec.seed, kMarketStream, t);
            const double sector = keyed_gaussian(spec.seed, sector_stream(g), t);
            const double noise = keyed_gaussian(spec.seed, noise_stream(spec, i), t);
            const double ret = vol[t] * (spec.market_beta * market + spec.sector_gamma * sector +
                                         spec.noise_sigma * noise);
            price *= std::exp(ret);
            panel.prices(i, t + 1) = price;
        }
    }
    return panel;
}

RegimePanel regime_calm_vs_volatile(const MarketSpec& spec) {
    RegimePanel out;
    out.panel = generate_panel(spec);
    out.windows = spec.regimes;
    return out;
}

} // namespace finnet
