#include "finnet/network.hpp"

#include "finnet/common.hpp"
#include "finnet/util.hpp"

#include <bit>
#include <cstdint>

namespace finnet {

SnapshotGraph::SnapshotGraph(int t, int n)
    : t_(t), n_(n), words_((n + 63) / 64),
      bits_(static_cast<std::size_t>(n) * ((n + 63) / 64), 0), degrees_(n, 0) {}

void SnapshotGraph::add_edge(int i, int j) {
    row(i)[j >> 6] |= (1ULL << (j & 63));
    row(j)[i >> 6] |= (1ULL << (i & 63));
    ++degrees_[i];
    ++degrees_[j];
    ++edge_count_;
}

bool SnapshotGraph::has_edge(int i, int j) const {
    return (row(i)[j >> 6] >> (j & 63)) & 1ULL;
}

SnapshotGraph SnapshotGraph::build(const CorrelationFrame& frame, double zeta) {
    const int n = static_cast<int>(frame.values.rows());
    SnapshotGraph g(frame.t, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (frame.values(i, j) > zeta) g.add_edge(i, j);
        }
    }
    return g;
}

SnapshotGraph SnapshotGraph::build_from_column(int t, const Eigen::VectorXd& r, double zeta) {
    const int n = static_cast<int>(r.size());
    SnapshotGraph g(t, n);
    for (int i = 0; i < n; ++i) {
        const double ri = r(i);
        for (int j = i + 1; j < n; ++j) {
            if (ri * r(j) > zeta) g.add_edge(i, j);
        }
    }
    return g;
}

long SnapshotGraph::neighbour_edge_count(int i) const {
    // Each edge {j,k} within N(i) is counted from both endpoints.
    const std::uint64_t* ri = row(i);
    long twice = 0;
    for (int j = 0; j < n_; ++j) {
        if (!((ri[j >> 6] >> (j & 63)) & 1ULL)) continue;
        const std::uint64_t* rj = row(j);
        for (int w = 0; w < words_; ++w) {
            twice += std::popcount(ri[w] & rj[w]);
        }
    }
    return twice / 2;
}

double node_clustering(const SnapshotGraph& g, int i) {
    const long k = g.degree(i);
    if (k < 2) return 0.0;
    const double possible = static_cast<double>(k) * (k - 1) / 2.0;
    return static_cast<double>(g.neighbour_edge_count(i)) / possible;
}

double average_clustering(const SnapshotGraph& g) {
    const int n = g.n_nodes();
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += node_clustering(g, i);
    return sum / n;
}

double average_degree(const SnapshotGraph& g) {
    return 2.0 * static_cast<double>(g.n_edges()) / g.n_nodes();
}

std::optional<double> degree_assortativity(const SnapshotGraph& g) {
    const long m = g.n_edges();
    if (m == 0) return std::nullopt;
    // Accumulate the edge-endpoint sums exactly. With j,k <= N-1 and
    // M <= N^2/2 all terms below stay far inside the int64 range.
    std::int64_t sum_jk = 0;    // sum over edges of j*k
    std::int64_t sum_lin = 0;   // sum of (j + k)
    std::int64_t sum_sq = 0;    // sum of (j^2 + k^2)
    const int n = g.n_nodes();
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (!g.has_edge(i, j)) continue;
            const std::int64_t di = g.degree(i);
            const std::int64_t dj = g.degree(j);
            sum_jk += di * dj;
            sum_lin += di + dj;
            sum_sq += di * di + dj * dj;
        }
    }
    // r = (mean(jk) - mean((j+k)/2)^2) / (mean((j^2+k^2)/2) - mean((j+k)/2)^2)
    // cleared of divisions: both brackets are exact integers.
    const std::int64_t numer = 4 * m * sum_jk - sum_lin * sum_lin;
    const std::int64_t denom = 2 * m * sum_sq - sum_lin * sum_lin;
    if (denom == 0) return std::nullopt;
    return static_cast<double>(numer) / static_cast<double>(denom);
}

namespace {

struct DayMetrics {
    double clustering = 0.0;
    double degree = 0.0;
    std::optional<double> assortativity;
};

void for_each_snapshot(const ReturnMatrix& returns, const ThresholdPolicy& policy, int workers,
                       const std::function<void(int, const SnapshotGraph&)>& sink) {
    const int steps = returns.n_steps();
    if (policy.kind == ThresholdKind::Dynamic && policy.n_steps() != steps) {
        throw ValidationError("dynamic policy length " + std::to_string(policy.n_steps()) +
                              " does not match panel steps " + std::to_string(steps));
    }
    parallel_for(steps, workers, [&](int t0) {
        const double zeta = policy.kind == ThresholdKind::Static
                                ? policy.multiplier * policy.q_static
                                : policy.multiplier * policy.q_dynamic[t0];
        const SnapshotGraph g =
            SnapshotGraph::build_from_column(t0 + 1, returns.values.col(t0), zeta);
        sink(t0, g);
    });
}

} // namespace

TopologySeries topology_series(const ReturnMatrix& returns, const ThresholdPolicy& policy,
                               int workers) {
    const int n = returns.n_stocks();
    const int steps = returns.n_steps();
    TopologySeries series;
    series.clustering.resize(steps);
    series.degree.resize(steps);
    series.assortativity.resize(steps);
    series.node_degrees.resize(n, steps);

    for_each_snapshot(returns, policy, workers, [&](int t0, const SnapshotGraph& g) {
        series.clustering[t0] = average_clustering(g);
        series.degree[t0] = average_degree(g);
        series.assortativity[t0] = degree_assortativity(g);
        for (int i = 0; i < n; ++i) series.node_degrees(i, t0) = g.degree(i);
    });

    // Time averages, accumulated in t order.
    double c_sum = 0.0, k_sum = 0.0, r_sum = 0.0;
    int r_count = 0;
    for (int t0 = 0; t0 < steps; ++t0) {
        c_sum += series.clustering[t0];
        k_sum += series.degree[t0];
        if (series.assortativity[t0]) {
            r_sum += *series.assortativity[t0];
            ++r_count;
        }
    }
    series.mean_clustering = c_sum / steps;
    series.mean_degree = k_sum / steps;
    if (r_count > 0) series.mean_assortativity = r_sum / r_count;
    return series;
}

double windowed_average_degree(const TopologySeries& series, int t_start, int t_end) {
    const int steps = series.n_steps();
    if (t_start < 1 || t_end > steps || t_start > t_end) {
        throw ValidationError("window [" + std::to_string(t_start) + ", " + std::to_string(t_end) +
                              "] invalid for series of length " + std::to_string(steps));
    }
    double sum = 0.0;
    for (int t = t_start; t <= t_end; ++t) sum += series.degree[t - 1];
    return sum / (t_end - t_start + 1);
}

namespace {

double quantile(std::vector<double> sorted_values, double p) {
    const std::size_t n = sorted_values.size();
    const double pos = p * (static_cast<double>(n) - 1.0);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, n - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted_values[lo] * (1.0 - frac) + sorted_values[hi] * frac;
}

} // namespace

DegreeEnvelope degree_envelope(const TopologySeries& series, double p_low, double p_high) {
    if (series.degree.empty()) throw ValidationError("empty series");
    if (!(p_low >= 0.0) || !(p_high <= 1.0) || !(p_low < p_high)) {
        throw ValidationError("envelope quantiles need 0 <= p_low < p_high <= 1");
    }
    std::vector<double> sorted = series.degree;
    std::sort(sorted.begin(), sorted.end());
    DegreeEnvelope env;
    env.lower = quantile(sorted, p_low);
    env.upper = quantile(std::move(sorted), p_high);
    return env;
}

DegreeEnsemble degree_ensemble(const Eigen::MatrixXi& node_degrees) {
    const int n = static_cast<int>(node_degrees.rows());
    const int steps = static_cast<int>(node_degrees.cols());
    DegreeEnsemble ensemble;
    ensemble.counts.assign(static_cast<std::size_t>(n), 0);
    for (int t = 0; t < steps; ++t) {
        for (int i = 0; i < n; ++i) {
            ++ensemble.counts[static_cast<std::size_t>(node_degrees(i, t))];
        }
    }
    ensemble.total = static_cast<long>(n) * steps;
    return ensemble;
}

DegreeEnsemble degree_ensemble(const ReturnMatrix& returns, const ThresholdPolicy& policy,
                               int workers) {
    const int n = returns.n_stocks();
    Eigen::MatrixXi degrees(n, returns.n_steps());
    for_each_snapshot(returns, policy, workers, [&](int t0, const SnapshotGraph& g) {
        for (int i = 0; i < n; ++i) degrees(i, t0) = g.degree(i);
    });
    return degree_ensemble(degrees);
}

} // namespace finnet
