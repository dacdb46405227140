#include "finnet/spectral.hpp"

#include "finnet/common.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace finnet {

NormalizedDegrees normalize_degree_series(const Eigen::MatrixXi& degrees) {
    const int n = static_cast<int>(degrees.rows());
    const int steps = static_cast<int>(degrees.cols());
    if (steps < 2) throw ValidationError("need at least 2 time steps to normalize degrees");

    NormalizedDegrees out;
    std::vector<double> means(n), stds(n);
    for (int i = 0; i < n; ++i) {
        double sum = 0.0;
        for (int t = 0; t < steps; ++t) sum += degrees(i, t);
        const double mean = sum / steps;
        double sq = 0.0;
        for (int t = 0; t < steps; ++t) {
            const double c = degrees(i, t) - mean;
            sq += c * c;
        }
        const double sigma = std::sqrt(sq / steps);
        means[i] = mean;
        stds[i] = sigma;
        if (sigma > 0.0) {
            out.included.push_back(i);
        } else {
            out.excluded.push_back(i);
        }
    }
    if (out.included.empty()) {
        throw ValidationError("every node has zero degree variance; no matrix to build");
    }
    out.values.resize(static_cast<int>(out.included.size()), steps);
    for (std::size_t r = 0; r < out.included.size(); ++r) {
        const int i = out.included[r];
        for (int t = 0; t < steps; ++t) {
            out.values(static_cast<int>(r), t) = (degrees(i, t) - means[i]) / stds[i];
        }
    }
    return out;
}

DegreeCorrelationMatrix degree_correlation_matrix(const NormalizedDegrees& normalized) {
    const int m = static_cast<int>(normalized.values.rows());
    const int steps = static_cast<int>(normalized.values.cols());
    DegreeCorrelationMatrix out;
    out.included = normalized.included;
    out.excluded = normalized.excluded;
    out.effective_n = m;
    out.values.resize(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = i; j < m; ++j) {
            double sum = 0.0;
            for (int t = 0; t < steps; ++t) {
                sum += normalized.values(i, t) * normalized.values(j, t);
            }
            const double f = sum / steps;
            out.values(i, j) = f;
            out.values(j, i) = f;
        }
    }
    return out;
}

EigenReport eigen_decompose(const DegreeCorrelationMatrix& matrix) {
    const int m = matrix.effective_n;
    if (m < 1) throw ValidationError("empty degree correlation matrix");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(matrix.values);
    if (solver.info() != Eigen::Success) {
        throw NumericError("eigendecomposition failed to converge (n = " + std::to_string(m) +
                           ", max |F_ij| = " +
                           std::to_string(matrix.values.cwiseAbs().maxCoeff()) + ")");
    }

    EigenReport report;
    report.included = matrix.included;
    report.eigenvalues.resize(m);
    report.eigenvectors.resize(m, m);
    // Solver returns ascending eigenvalues; flip to descending and fix signs.
    for (int k = 0; k < m; ++k) {
        const int src = m - 1 - k;
        report.eigenvalues(k) = solver.eigenvalues()(src);
        Eigen::VectorXd v = solver.eigenvectors().col(src);
        int arg = 0;
        double best = -1.0;
        for (int i = 0; i < m; ++i) {
            if (std::abs(v(i)) > best) {
                best = std::abs(v(i));
                arg = i;
            }
        }
        if (v(arg) < 0.0) v = -v;
        report.eigenvectors.col(k) = v;
    }
    return report;
}

SectorProjection sector_projection(const EigenReport& report,
                                   const std::vector<std::string>& node_sectors, int top_m) {
    const int m = static_cast<int>(report.eigenvectors.rows());
    const int n_vectors = static_cast<int>(report.eigenvectors.cols());
    if (static_cast<int>(node_sectors.size()) != m) {
        throw ValidationError("sector label count " + std::to_string(node_sectors.size()) +
                              " does not match included node count " + std::to_string(m));
    }
    for (int i = 0; i < m; ++i) {
        if (node_sectors[i].empty()) {
            throw ValidationError("missing sector label for included node " + std::to_string(i));
        }
    }
    if (top_m < 1 || top_m > n_vectors) {
        throw ValidationError("top_m " + std::to_string(top_m) + " outside [1, " +
                              std::to_string(n_vectors) + "]");
    }

    SectorProjection proj;
    {
        std::set<std::string> labels(node_sectors.begin(), node_sectors.end());
        proj.sector_labels.assign(labels.begin(), labels.end());
    }
    const int n_sectors = static_cast<int>(proj.sector_labels.size());
    std::vector<int> sector_of(m);
    std::vector<int> sector_count(n_sectors, 0);
    for (int i = 0; i < m; ++i) {
        const auto it = std::lower_bound(proj.sector_labels.begin(), proj.sector_labels.end(),
                                         node_sectors[i]);
        sector_of[i] = static_cast<int>(it - proj.sector_labels.begin());
        ++sector_count[sector_of[i]];
    }

    for (int v = 0; v < top_m; ++v) {
        std::vector<double> sums(n_sectors, 0.0);
        for (int i = 0; i < m; ++i) {
            sums[sector_of[i]] += std::abs(report.eigenvectors(i, v));
        }
        std::vector<double> means(n_sectors);
        int dominant = 0;
        for (int s = 0; s < n_sectors; ++s) {
            means[s] = sums[s] / sector_count[s];
            if (means[s] > means[dominant]) dominant = s;
        }
        proj.mean_abs.push_back(std::move(means));
        proj.dominant.push_back(proj.sector_labels[dominant]);
    }
    return proj;
}

} // namespace finnet
