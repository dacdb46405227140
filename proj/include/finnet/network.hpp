#pragma once

#include "finnet/correlation.hpp"
#include "finnet/market_data.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <vector>

namespace finnet {

/// Undirected simple graph for one day. Adjacency is a symmetric bit matrix
/// (one N-bit row per node); dense pair storage is the right fit at N of a
/// few hundred.
class SnapshotGraph {
public:
    SnapshotGraph(int t, int n);

    /// Edge {i,j} present iff i != j and frame.values(i,j) > zeta (strict).
    static SnapshotGraph build(const CorrelationFrame& frame, double zeta);

    /// Same rule evaluated from one return column; products are computed with
    /// the same expression as cross_correlation_frame, so edges are identical.
    static SnapshotGraph build_from_column(int t, const Eigen::VectorXd& r, double zeta);

    int day() const { return t_; }
    int n_nodes() const { return n_; }
    long n_edges() const { return edge_count_; }
    bool has_edge(int i, int j) const;
    int degree(int i) const { return degrees_[i]; }
    const std::vector<int>& degrees() const { return degrees_; }

    /// Number of edges among the neighbours of node i.
    long neighbour_edge_count(int i) const;

private:
    void add_edge(int i, int j);
    const std::uint64_t* row(int i) const { return bits_.data() + static_cast<std::size_t>(i) * words_; }
    std::uint64_t* row(int i) { return bits_.data() + static_cast<std::size_t>(i) * words_; }

    int t_;
    int n_;
    int words_;
    std::vector<std::uint64_t> bits_;
    std::vector<int> degrees_;
    long edge_count_ = 0;
};

/// Watts-Strogatz local clustering; 0 when the node has fewer than 2 neighbours.
double node_clustering(const SnapshotGraph& g, int i);

/// C(t): mean of node clustering over all nodes.
double average_clustering(const SnapshotGraph& g);

/// K(t) = 2M/N.
double average_degree(const SnapshotGraph& g);

/// Degree correlation over edge endpoints; absent when M = 0 or the
/// denominator vanishes (all endpoint degrees equal). Evaluated with exact
/// integer accumulators, so regular graphs yield an exact zero denominator.
std::optional<double> degree_assortativity(const SnapshotGraph& g);

/// Per-day topology metrics over the whole panel, plus their time averages.
struct TopologySeries {
    std::vector<double> clustering;                    // C(t), length T
    std::vector<double> degree;                        // K(t), length T
    std::vector<std::optional<double>> assortativity;  // r(t), absent when undefined
    double mean_clustering = 0.0;                      // C-bar
    double mean_degree = 0.0;                          // K-bar
    std::optional<double> mean_assortativity;          // r-bar over defined entries
    Eigen::MatrixXi node_degrees;                      // N x T, k_i(t)

    int n_steps() const { return static_cast<int>(degree.size()); }
};

/// Build every snapshot under the policy and collect the metric series.
/// Days are independent; `workers` > 1 parallelizes without changing results.
TopologySeries topology_series(const ReturnMatrix& returns, const ThresholdPolicy& policy,
                               int workers = 1);

/// Mean of K(t) over the closed 1-based window [t_start, t_end].
double windowed_average_degree(const TopologySeries& series, int t_start, int t_end);

/// Empirical envelope diagnostics for K(t): low/high quantiles of the series
/// (linear interpolation between order statistics). Descriptive only; no
/// model of the envelopes is implied.
struct DegreeEnvelope {
    double lower = 0.0;   // quantile at p_low
    double upper = 0.0;   // quantile at p_high
};
DegreeEnvelope degree_envelope(const TopologySeries& series, double p_low = 0.05,
                               double p_high = 0.95);

/// Histogram of k_i(t) pooled over all nodes and all days.
struct DegreeEnsemble {
    std::vector<long> counts;   // index k in [0, N-1]
    long total = 0;             // N x T

    double probability(int k) const {
        return static_cast<double>(counts[k]) / static_cast<double>(total);
    }
};

DegreeEnsemble degree_ensemble(const ReturnMatrix& returns, const ThresholdPolicy& policy,
                               int workers = 1);
DegreeEnsemble degree_ensemble(const Eigen::MatrixXi& node_degrees);

} // namespace finnet
