#include "finnet/dfa.hpp"

#include "finnet/common.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace finnet {

namespace {

constexpr int kMinSeriesLength = 16;
constexpr int kGridPoints = 20;
constexpr int kMinCrossoverPoints = 8;
constexpr int kMinSegmentPoints = 3;
constexpr double kCrossoverGainGate = 0.2;

struct LinePoints {
    std::vector<double> x;   // log scale
    std::vector<double> y;   // log F
    std::vector<int> scale;
    int zeros = 0;
};

LinePoints log_points(const std::vector<int>& scales, const std::vector<double>& fluctuations,
                      int t_lo, int t_hi) {
    if (scales.size() != fluctuations.size()) {
        throw ValidationError("scales and fluctuations differ in length");
    }
    LinePoints pts;
    for (std::size_t k = 0; k < scales.size(); ++k) {
        if (scales[k] < t_lo || scales[k] > t_hi) continue;
        if (!(fluctuations[k] > 0.0)) {
            ++pts.zeros;
            continue;
        }
        pts.x.push_back(std::log(static_cast<double>(scales[k])));
        pts.y.push_back(std::log(fluctuations[k]));
        pts.scale.push_back(scales[k]);
    }
    return pts;
}

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double sse = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y, std::size_t lo,
                 std::size_t hi) {
    const std::size_t n = hi - lo;
    double xm = 0.0, ym = 0.0;
    for (std::size_t k = lo; k < hi; ++k) {
        xm += x[k];
        ym += y[k];
    }
    xm /= n;
    ym /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t k = lo; k < hi; ++k) {
        sxx += (x[k] - xm) * (x[k] - xm);
        sxy += (x[k] - xm) * (y[k] - ym);
    }
    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = ym - fit.slope * xm;
    for (std::size_t k = lo; k < hi; ++k) {
        const double r = y[k] - (fit.intercept + fit.slope * x[k]);
        fit.sse += r * r;
    }
    return fit;
}

} // namespace

std::vector<double> dfa_profile(const std::vector<double>& series) {
    const int length = static_cast<int>(series.size());
    if (length < kMinSeriesLength) {
        throw ValidationError("series too short for DFA: length " + std::to_string(length) +
                              " < " + std::to_string(kMinSeriesLength));
    }
    for (double v : series) {
        if (!std::isfinite(v)) throw ValidationError("series contains a non-finite entry");
    }
    double sum = 0.0;
    for (double v : series) sum += v;
    const double mean = sum / length;
    std::vector<double> profile(series.size());
    double acc = 0.0;
    for (int k = 0; k < length; ++k) {
        acc += series[k] - mean;
        profile[k] = acc;
    }
    return profile;
}

std::vector<int> default_scale_grid(int series_length) {
    const int hi = series_length / 4;
    if (hi < 4) {
        throw ValidationError("series too short for a scale grid: length " +
                              std::to_string(series_length));
    }
    std::vector<int> grid;
    const double log_lo = std::log(4.0);
    const double log_hi = std::log(static_cast<double>(hi));
    for (int k = 0; k < kGridPoints; ++k) {
        const double f = kGridPoints == 1 ? 0.0 : static_cast<double>(k) / (kGridPoints - 1);
        const int scale =
            static_cast<int>(std::lround(std::exp(log_lo + f * (log_hi - log_lo))));
        const int clipped = std::clamp(scale, 4, hi);
        if (grid.empty() || clipped > grid.back()) grid.push_back(clipped);
    }
    return grid;
}

std::vector<double> fluctuation_function(const std::vector<double>& profile,
                                         const std::vector<int>& scales) {
    const int length = static_cast<int>(profile.size());
    std::vector<double> fluctuations;
    fluctuations.reserve(scales.size());
    for (const int t : scales) {
        if (t < 4 || t > length / 4) {
            throw ValidationError("scale " + std::to_string(t) + " outside [4, " +
                                  std::to_string(length / 4) + "]");
        }
        const int windows = length / t;
        const int covered = windows * t;    // trailing remainder discarded
        // Within-window linear detrend against the local index 1..t.
        const double xm = (t + 1) / 2.0;
        double sxx = 0.0;
        for (int k = 1; k <= t; ++k) sxx += (k - xm) * (k - xm);
        double total = 0.0;
        for (int w = 0; w < windows; ++w) {
            const double* seg = profile.data() + static_cast<std::size_t>(w) * t;
            double ym = 0.0;
            for (int k = 0; k < t; ++k) ym += seg[k];
            ym /= t;
            double sxy = 0.0;
            for (int k = 0; k < t; ++k) sxy += (k + 1 - xm) * (seg[k] - ym);
            const double slope = sxy / sxx;
            for (int k = 0; k < t; ++k) {
                const double r = seg[k] - (ym + slope * (k + 1 - xm));
                total += r * r;
            }
        }
        fluctuations.push_back(std::sqrt(total / covered));
    }
    return fluctuations;
}

ExponentFit fit_exponent(const std::vector<int>& scales, const std::vector<double>& fluctuations,
                         int t_lo, int t_hi) {
    const LinePoints pts = log_points(scales, fluctuations, t_lo, t_hi);
    if (pts.x.size() < 4) {
        throw ValidationError("fewer than 4 usable points in fit range [" + std::to_string(t_lo) +
                              ", " + std::to_string(t_hi) + "]");
    }
    const LineFit line = fit_line(pts.x, pts.y, 0, pts.x.size());
    ExponentFit fit;
    fit.theta = line.slope;
    fit.intercept = line.intercept;
    fit.points_used = static_cast<int>(pts.x.size());
    fit.zeros_excluded = pts.zeros;
    return fit;
}

std::optional<CrossoverFit> fit_crossover(const std::vector<int>& scales,
                                          const std::vector<double>& fluctuations) {
    if (scales.empty()) throw ValidationError("no points for crossover fit");
    const LinePoints pts = log_points(scales, fluctuations, scales.front(), scales.back());
    const int n = static_cast<int>(pts.x.size());
    if (n < kMinCrossoverPoints) {
        throw ValidationError("insufficient points for crossover fit: " + std::to_string(n) +
                              " < " + std::to_string(kMinCrossoverPoints));
    }
    if (pts.scale.back() < 10 * pts.scale.front()) {
        throw ValidationError("crossover fit needs scales spanning at least one decade");
    }

    const LineFit single = fit_line(pts.x, pts.y, 0, pts.x.size());
    if (!(single.sse > 1e-18)) return std::nullopt;   // already an exact line

    // Continuous two-segment fit: y ~ a + b_lo*min(x - xc, 0) + b_hi*max(x - xc, 0),
    // with the hinge xc scanned over interior grid scales.
    double best_sse = -1.0;
    CrossoverFit best;
    for (int b = kMinSegmentPoints - 1; b <= n - 1 - kMinSegmentPoints; ++b) {
        const double xc = pts.x[b];
        Eigen::MatrixXd design(n, 3);
        Eigen::VectorXd target(n);
        for (int k = 0; k < n; ++k) {
            design(k, 0) = 1.0;
            design(k, 1) = std::min(pts.x[k] - xc, 0.0);
            design(k, 2) = std::max(pts.x[k] - xc, 0.0);
            target(k) = pts.y[k];
        }
        const Eigen::Vector3d coef =
            (design.transpose() * design).ldlt().solve(design.transpose() * target);
        const double sse = (target - design * coef).squaredNorm();
        if (best_sse < 0.0 || sse < best_sse) {
            best_sse = sse;
            best.t_c = pts.scale[b];
            best.theta_below = coef(1);
            best.theta_above = coef(2);
        }
    }
    best.sse_gain = (single.sse - best_sse) / single.sse;
    if (best.sse_gain < kCrossoverGainGate) return std::nullopt;
    return best;
}

GapFill fill_gaps(const std::vector<std::optional<double>>& series) {
    GapFill out;
    double sum = 0.0;
    int defined = 0;
    for (const auto& v : series) {
        if (v) {
            sum += *v;
            ++defined;
        }
    }
    if (defined == 0) throw ValidationError("series has no defined entries");
    const int gaps = static_cast<int>(series.size()) - defined;
    out.gap_fraction = static_cast<double>(gaps) / static_cast<double>(series.size());
    if (out.gap_fraction > 0.10) {
        throw ValidationError("gap fraction " + std::to_string(out.gap_fraction) +
                              " exceeds 10%; refusing to fill");
    }
    const double mean = sum / defined;
    out.values.reserve(series.size());
    for (const auto& v : series) out.values.push_back(v ? *v : mean);
    return out;
}

DfaResult analyze_series(const std::vector<double>& series, const DfaOptions& options) {
    DfaResult result;
    const std::vector<double> profile = dfa_profile(series);
    result.scales = default_scale_grid(static_cast<int>(series.size()));
    result.fluctuations = fluctuation_function(profile, result.scales);

    if (options.fit_range) {
        result.fit_range = *options.fit_range;
    } else {
        // Default range drops the two smallest and two largest scales.
        const std::size_t m = result.scales.size();
        if (m >= 8) {
            result.fit_range = {result.scales[2], result.scales[m - 3]};
        } else {
            result.fit_range = {result.scales.front(), result.scales.back()};
        }
    }
    result.theta =
        fit_exponent(result.scales, result.fluctuations, result.fit_range.first,
                     result.fit_range.second)
            .theta;
    if (options.want_crossover) {
        try {
            result.crossover = fit_crossover(result.scales, result.fluctuations);
        } catch (const ValidationError&) {
            // Grid too small for a meaningful scan; report no crossover.
            result.crossover = std::nullopt;
        }
    }
    return result;
}

DfaResult analyze_series(const std::vector<std::optional<double>>& series,
                         const DfaOptions& options) {
    const GapFill filled = fill_gaps(series);
    DfaResult result = analyze_series(filled.values, options);
    result.gap_fraction = filled.gap_fraction;
    return result;
}

} // namespace finnet
