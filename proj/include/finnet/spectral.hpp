#pragma once

#include <Eigen/Dense>

#include <map>
#include <string>
#include <vector>

namespace finnet {

/// Degree series standardized per node (population std); constant-degree
/// nodes carry no information and are moved to `excluded`.
struct NormalizedDegrees {
    Eigen::MatrixXd values;        // included nodes x T
    std::vector<int> included;     // original node indices, ascending
    std::vector<int> excluded;     // zero-variance node indices, ascending
};

NormalizedDegrees normalize_degree_series(const Eigen::MatrixXi& degrees);

/// F_ij = (1/T) sum_t ktilde_i(t) ktilde_j(t) over included nodes.
struct DegreeCorrelationMatrix {
    Eigen::MatrixXd values;        // effective_n x effective_n, symmetric
    std::vector<int> included;
    std::vector<int> excluded;
    int effective_n = 0;
};

DegreeCorrelationMatrix degree_correlation_matrix(const NormalizedDegrees& normalized);

/// Full symmetric eigendecomposition, eigenvalues descending. Each
/// eigenvector is sign-fixed so its largest-magnitude component is positive.
struct EigenReport {
    Eigen::VectorXd eigenvalues;   // descending
    Eigen::MatrixXd eigenvectors;  // column m belongs to eigenvalues(m)
    std::vector<int> included;     // node indices behind the components
};

EigenReport eigen_decompose(const DegreeCorrelationMatrix& matrix);

/// Per-sector mean |u_i| for the top_m eigenvectors.
struct SectorProjection {
    std::vector<std::string> sector_labels;            // ascending labels
    std::vector<std::vector<double>> mean_abs;         // [vector][sector]
    std::vector<std::string> dominant;                 // per vector
};

/// `sectors` maps every included node's stock id to its sector code; missing
/// labels are an error.
SectorProjection sector_projection(const EigenReport& report,
                                   const std::vector<std::string>& node_sectors, int top_m);

} // namespace finnet
