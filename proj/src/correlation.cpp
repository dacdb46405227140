#include "finnet/correlation.hpp"

#include "finnet/common.hpp"
#include "finnet/util.hpp"

#include <sstream>

namespace finnet {

namespace {

// Sum of r_i(t) r_j(t) over pairs i < j, in the canonical (i, then j) order.
double pair_sum_at(const Eigen::MatrixXd& values, int col) {
    const int n = static_cast<int>(values.rows());
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double ri = values(i, col);
        for (int j = i + 1; j < n; ++j) {
            sum += ri * values(j, col);
        }
    }
    return sum;
}

} // namespace

bool ThresholdPolicy::in_paper_range() const {
    const double hi = kind == ThresholdKind::Static ? 4.0 : 6.0;
    return multiplier >= 0.25 && multiplier <= hi;
}

CorrelationFrame cross_correlation_frame(const ReturnMatrix& returns, int t) {
    const int steps = returns.n_steps();
    if (t < 1 || t > steps) {
        throw ValidationError("day index " + std::to_string(t) + " out of range [1, " +
                              std::to_string(steps) + "]");
    }
    const int n = returns.n_stocks();
    CorrelationFrame frame;
    frame.t = t;
    frame.values.resize(n, n);
    const auto col = returns.values.col(t - 1);
    for (int i = 0; i < n; ++i) {
        frame.values(i, i) = col(i) * col(i);
        for (int j = i + 1; j < n; ++j) {
            const double g = col(i) * col(j);   // computed once per pair
            frame.values(i, j) = g;
            frame.values(j, i) = g;
        }
    }
    return frame;
}

double static_baseline(const ReturnMatrix& returns) {
    const int n = returns.n_stocks();
    const int steps = returns.n_steps();
    double total = 0.0;
    for (int t = 0; t < steps; ++t) {
        total += pair_sum_at(returns.values, t);
    }
    const double pairs = static_cast<double>(n) * (n - 1) / 2.0;
    return total / (pairs * steps);
}

std::vector<double> dynamic_baseline(const ReturnMatrix& returns) {
    const int n = returns.n_stocks();
    const int steps = returns.n_steps();
    const double pairs = static_cast<double>(n) * (n - 1) / 2.0;
    std::vector<double> qd(steps);
    for (int t = 0; t < steps; ++t) {
        qd[t] = pair_sum_at(returns.values, t) / pairs;
    }
    return qd;
}

ThresholdPolicy make_static_policy(const ReturnMatrix& returns, double multiplier) {
    if (!(multiplier > 0.0)) throw ValidationError("threshold multiplier must be positive");
    ThresholdPolicy policy;
    policy.kind = ThresholdKind::Static;
    policy.multiplier = multiplier;
    policy.q_static = static_baseline(returns);
    return policy;
}

ThresholdPolicy make_dynamic_policy(const ReturnMatrix& returns, double multiplier) {
    if (!(multiplier > 0.0)) throw ValidationError("threshold multiplier must be positive");
    ThresholdPolicy policy;
    policy.kind = ThresholdKind::Dynamic;
    policy.multiplier = multiplier;
    policy.q_dynamic = dynamic_baseline(returns);
    return policy;
}

double threshold_at(const ThresholdPolicy& policy, int t) {
    if (policy.kind == ThresholdKind::Static) {
        if (t < 1) throw ValidationError("day index must be >= 1");
        return policy.multiplier * policy.q_static;
    }
    if (t < 1 || t > policy.n_steps()) {
        throw ValidationError("day index " + std::to_string(t) + " out of range [1, " +
                              std::to_string(policy.n_steps()) + "]");
    }
    return policy.multiplier * policy.q_dynamic[t - 1];
}

std::string thresholds_csv(double q_static, const std::vector<double>& q_dynamic) {
    std::ostringstream out;
    out << "# Q_s = " << fmt_double(q_static) << '\n';
    out << "t,Q_d\n";
    for (std::size_t t = 0; t < q_dynamic.size(); ++t) {
        out << (t + 1) << ',' << fmt_double(q_dynamic[t]) << '\n';
    }
    return out.str();
}

} // namespace finnet
