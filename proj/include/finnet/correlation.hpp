#pragma once

#include "finnet/market_data.hpp"

#include <Eigen/Dense>

#include <vector>

namespace finnet {

/// One day's instantaneous cross-correlations G_ij(t) = r_i(t) r_j(t).
/// Rank one by construction; the diagonal is kept but never forms edges.
struct CorrelationFrame {
    int t = 0;                 // 1-based day index
    Eigen::MatrixXd values;    // N x N, symmetric
};

enum class ThresholdKind { Static, Dynamic };

/// Edge-creation rule: zeta = multiplier * Q_s (static) or multiplier * Q_d(t).
struct ThresholdPolicy {
    ThresholdKind kind = ThresholdKind::Static;
    double multiplier = 1.0;
    double q_static = 0.0;               // populated iff Static
    std::vector<double> q_dynamic;       // populated iff Dynamic, length T

    int n_steps() const { return static_cast<int>(q_dynamic.size()); }

    /// True when the multiplier lies in the range the underlying study sweeps
    /// (static 0.25..4, dynamic 0.25..6). Outside values are legal but logged.
    bool in_paper_range() const;
};

/// G frame for day t (1-based). Throws on t out of [1, T].
CorrelationFrame cross_correlation_frame(const ReturnMatrix& returns, int t);

/// Q_s: average cross-correlation over all pairs and all days.
/// Summation order is fixed (t outer, then i, then j > i) for reproducibility.
double static_baseline(const ReturnMatrix& returns);

/// Q_d(t) for every t: per-day average over pairs; may be negative.
std::vector<double> dynamic_baseline(const ReturnMatrix& returns);

ThresholdPolicy make_static_policy(const ReturnMatrix& returns, double multiplier);
ThresholdPolicy make_dynamic_policy(const ReturnMatrix& returns, double multiplier);

/// zeta at day t (1-based). Static ignores t's value but still validates >= 1.
double threshold_at(const ThresholdPolicy& policy, int t);

/// Write `thresholds.csv`: a `# Q_s = ...` metadata line, then `t,Q_d` rows.
std::string thresholds_csv(double q_static, const std::vector<double>& q_dynamic);

} // namespace finnet
