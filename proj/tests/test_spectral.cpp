#include "finnet/spectral.hpp"

#include "finnet/common.hpp"
#include "finnet/synthetic.hpp"
#include "finnet/util.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

using namespace finnet;

namespace {

Eigen::MatrixXi random_degrees(int n, int steps, std::uint64_t seed, int ceiling = 12) {
    SplitMix rng(seed);
    Eigen::MatrixXi degrees(n, steps);
    for (int i = 0; i < n; ++i) {
        for (int t = 0; t < steps; ++t) degrees(i, t) = rng.next_int(0, ceiling);
    }
    return degrees;
}

/// Degree panel with a planted market mode and three sector blocks of
/// unequal sizes over a diversified background. Distinct sector sizes
/// separate the block eigenvalues; the background keeps the market
/// direction independent of the sector indicators.
struct Planted {
    Eigen::MatrixXi degrees;
    std::vector<std::string> labels;   // A/B/C sectors, M for background
    std::vector<int> sector_of;        // 0..2, or 3 for background
};

Planted planted_panel(int steps, std::uint64_t seed) {
    const int sizes[3] = {8, 5, 3};
    const int background = 24;
    const int n = sizes[0] + sizes[1] + sizes[2] + background;
    Planted out;
    out.degrees.resize(n, steps);
    for (int i = 0; i < n; ++i) {
        int sector = 3;
        if (i < sizes[0]) {
            sector = 0;
        } else if (i < sizes[0] + sizes[1]) {
            sector = 1;
        } else if (i < sizes[0] + sizes[1] + sizes[2]) {
            sector = 2;
        }
        out.sector_of.push_back(sector);
        out.labels.push_back(sector < 3 ? sector_code(sector) : "M");
        for (int t = 0; t < steps; ++t) {
            const double market = keyed_gaussian(seed, 901, t);
            const double block = sector < 3 ? keyed_gaussian(seed, 902 + sector, t) : 0.0;
            const double noise = keyed_gaussian(seed, 910 + i, t);
            const double value = 30.0 + 3.2 * market + 6.0 * block + 2.0 * noise;
            out.degrees(i, t) = std::max(0, static_cast<int>(std::lround(value)));
        }
    }
    return out;
}

} // namespace

TEST_CASE("normalize_degree_series excludes constant nodes and standardizes") {
    Eigen::MatrixXi degrees(3, 2);
    degrees << 5, 5,
               0, 2,
               1, 3;
    const NormalizedDegrees nd = normalize_degree_series(degrees);
    CHECK(nd.excluded == std::vector<int>{0});
    CHECK(nd.included == std::vector<int>{1, 2});
    CHECK(nd.values(0, 0) == doctest::Approx(-1.0));
    CHECK(nd.values(0, 1) == doctest::Approx(1.0));

    Eigen::MatrixXi flat(2, 3);
    flat << 4, 4, 4,
            7, 7, 7;
    CHECK_THROWS_WITH_AS(normalize_degree_series(flat), doctest::Contains("zero degree variance"),
                         ValidationError);
}

TEST_CASE("normalized degree rows have zero mean and unit population std") {
    const Eigen::MatrixXi degrees = random_degrees(8, 50, 3);
    const NormalizedDegrees nd = normalize_degree_series(degrees);
    for (int r = 0; r < nd.values.rows(); ++r) {
        double mean = 0.0, var = 0.0;
        for (int t = 0; t < 50; ++t) mean += nd.values(r, t);
        mean /= 50;
        for (int t = 0; t < 50; ++t) {
            var += (nd.values(r, t) - mean) * (nd.values(r, t) - mean);
        }
        var /= 50;
        CHECK(std::abs(mean) <= 1e-10);
        CHECK(std::abs(std::sqrt(var) - 1.0) <= 1e-10);
    }
}

TEST_CASE("degree_correlation_matrix basics and oracle equivalence") {
    SUBCASE("identical and opposite rows") {
        Eigen::MatrixXi degrees(3, 4);
        degrees << 1, 2, 3, 4,
                   1, 2, 3, 4,
                   4, 3, 2, 1;
        const DegreeCorrelationMatrix f = degree_correlation_matrix(normalize_degree_series(degrees));
        CHECK(f.values(0, 1) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(f.values(0, 2) == doctest::Approx(-1.0).epsilon(1e-12));
    }
    SUBCASE("random panel against the double-loop oracle") {
        const Eigen::MatrixXi degrees = random_degrees(9, 40, 11);
        const DegreeCorrelationMatrix f = degree_correlation_matrix(normalize_degree_series(degrees));
        std::vector<std::vector<int>> raw(9, std::vector<int>(40));
        for (int i = 0; i < 9; ++i) {
            for (int t = 0; t < 40; ++t) raw[i][t] = degrees(i, t);
        }
        const oracle::Matrix ref = oracle::degree_correlation(raw);
        REQUIRE(static_cast<int>(ref.size()) == f.effective_n);
        for (int i = 0; i < f.effective_n; ++i) {
            for (int j = 0; j < f.effective_n; ++j) {
                CHECK(std::abs(f.values(i, j) - ref[i][j]) <= 1e-12);
            }
        }
        // Diagonal is 1 and the trace matches the effective size.
        double trace = 0.0;
        for (int i = 0; i < f.effective_n; ++i) {
            CHECK(std::abs(f.values(i, i) - 1.0) <= 1e-10);
            trace += f.values(i, i);
        }
        CHECK(std::abs(trace - f.effective_n) <= 1e-8);
    }
}

TEST_CASE("eigen_decompose on the all-ones matrix") {
    const int n = 6;
    DegreeCorrelationMatrix matrix;
    matrix.values = Eigen::MatrixXd::Ones(n, n);
    matrix.effective_n = n;
    for (int i = 0; i < n; ++i) matrix.included.push_back(i);
    const EigenReport report = eigen_decompose(matrix);
    CHECK(report.eigenvalues(0) == doctest::Approx(static_cast<double>(n)).epsilon(1e-10));
    for (int k = 1; k < n; ++k) {
        CHECK(std::abs(report.eigenvalues(k)) <= 1e-10);
    }
    // Descending order.
    for (int k = 1; k < n; ++k) CHECK(report.eigenvalues(k) <= report.eigenvalues(k - 1) + 1e-12);
}

TEST_CASE("independent degree series stay in the unit eigenvalue band") {
    // N = 20 nodes, T = 4000 steps of independent noise: all eigenvalues
    // should sit within 1 +/- 0.5.
    const Eigen::MatrixXi degrees = random_degrees(20, 4000, 77);
    const EigenReport report =
        eigen_decompose(degree_correlation_matrix(normalize_degree_series(degrees)));
    for (int k = 0; k < report.eigenvalues.size(); ++k) {
        CHECK(report.eigenvalues(k) > 0.5);
        CHECK(report.eigenvalues(k) < 1.5);
    }
}

TEST_CASE("eigen reconstruction, orthonormality and eigenvalue sum") {
    const Eigen::MatrixXi degrees = random_degrees(10, 60, 5);
    const DegreeCorrelationMatrix matrix = degree_correlation_matrix(normalize_degree_series(degrees));
    const EigenReport report = eigen_decompose(matrix);
    const int m = matrix.effective_n;

    Eigen::MatrixXd rebuilt = Eigen::MatrixXd::Zero(m, m);
    double lambda_sum = 0.0;
    for (int k = 0; k < m; ++k) {
        rebuilt += report.eigenvalues(k) * report.eigenvectors.col(k) *
                   report.eigenvectors.col(k).transpose();
        lambda_sum += report.eigenvalues(k);
        CHECK(std::abs(report.eigenvectors.col(k).norm() - 1.0) <= 1e-10);
        for (int l = 0; l < k; ++l) {
            CHECK(std::abs(report.eigenvectors.col(k).dot(report.eigenvectors.col(l))) <= 1e-8);
        }
    }
    CHECK((rebuilt - matrix.values).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK(std::abs(lambda_sum - matrix.values.trace()) <= 1e-8);
}

TEST_CASE("permuting nodes permutes eigenvector components") {
    const Eigen::MatrixXi degrees = random_degrees(8, 80, 21);
    std::vector<int> perm = {3, 1, 7, 0, 5, 2, 6, 4};
    Eigen::MatrixXi shuffled(8, 80);
    for (int i = 0; i < 8; ++i) shuffled.row(i) = degrees.row(perm[i]);

    const EigenReport a = eigen_decompose(degree_correlation_matrix(normalize_degree_series(degrees)));
    const EigenReport b =
        eigen_decompose(degree_correlation_matrix(normalize_degree_series(shuffled)));
    for (int k = 0; k < 8; ++k) {
        CHECK(std::abs(a.eigenvalues(k) - b.eigenvalues(k)) <= 1e-10);
    }
    // Compare |components| through the permutation for the leading vectors
    // (signs are fixed per vector, which permutation does not disturb for
    // non-degenerate eigenvalues).
    for (int k = 0; k < 3; ++k) {
        for (int i = 0; i < 8; ++i) {
            CHECK(std::abs(b.eigenvectors(i, k)) ==
                  doctest::Approx(std::abs(a.eigenvectors(perm[i], k))).epsilon(1e-8));
        }
    }
}

TEST_CASE("sign convention makes the decomposition deterministic") {
    const Eigen::MatrixXi degrees = random_degrees(7, 64, 99);
    const DegreeCorrelationMatrix matrix = degree_correlation_matrix(normalize_degree_series(degrees));
    const EigenReport a = eigen_decompose(matrix);
    const EigenReport b = eigen_decompose(matrix);
    CHECK((a.eigenvectors - b.eigenvectors).cwiseAbs().maxCoeff() == 0.0);
    for (int k = 0; k < a.eigenvectors.cols(); ++k) {
        int arg = 0;
        for (int i = 0; i < a.eigenvectors.rows(); ++i) {
            if (std::abs(a.eigenvectors(i, k)) > std::abs(a.eigenvectors(arg, k))) arg = i;
        }
        CHECK(a.eigenvectors(arg, k) > 0.0);
    }
}

TEST_CASE("planted market and sector structure is recovered") {
    const Planted planted = planted_panel(4000, 4242);
    const int n = static_cast<int>(planted.labels.size());
    const DegreeCorrelationMatrix matrix =
        degree_correlation_matrix(normalize_degree_series(planted.degrees));
    const EigenReport report = eigen_decompose(matrix);
    REQUIRE(static_cast<int>(report.included.size()) == n);

    // Market mode: all components of one sign, coefficient of variation < 0.5.
    const Eigen::VectorXd u0 = report.eigenvectors.col(0);
    const double mean = u0.mean();
    const double sd = std::sqrt((u0.array() - mean).square().mean());
    CHECK(u0.minCoeff() > 0.0);
    CHECK(sd / mean < 0.5);

    // Eigenvectors 1..3: at least 60% of squared mass on a single sector,
    // and their dominant sectors are exactly {A, B, C}.
    const SectorProjection proj = sector_projection(report, planted.labels, 4);
    std::set<std::string> dominated;
    for (int v = 1; v <= 3; ++v) {
        double mass[4] = {0.0, 0.0, 0.0, 0.0};
        for (int i = 0; i < n; ++i) {
            mass[planted.sector_of[i]] +=
                report.eigenvectors(i, v) * report.eigenvectors(i, v);
        }
        const double total = mass[0] + mass[1] + mass[2] + mass[3];
        const double top = std::max({mass[0], mass[1], mass[2]});
        CHECK(top / total >= 0.6);
        dominated.insert(proj.dominant[v]);
    }
    CHECK(dominated == std::set<std::string>{"A", "B", "C"});
}

TEST_CASE("sector_projection basics") {
    // Hand-built report: a uniform vector and a localized one over 6 nodes.
    EigenReport report;
    report.eigenvalues.resize(2);
    report.eigenvalues << 3.0, 1.5;
    report.eigenvectors.resize(6, 2);
    const double u = 1.0 / std::sqrt(6.0);
    for (int i = 0; i < 6; ++i) {
        report.eigenvectors(i, 0) = u;
        report.eigenvectors(i, 1) = i < 2 ? 0.7 : 0.01;
    }
    report.included = {0, 1, 2, 3, 4, 5};

    SUBCASE("single-sector map dominates trivially") {
        const std::vector<std::string> labels(6, "Z");
        const SectorProjection proj = sector_projection(report, labels, 2);
        CHECK(proj.dominant[0] == "Z");
        CHECK(proj.dominant[1] == "Z");
    }
    SUBCASE("uniform market mode projects equally over sectors") {
        const std::vector<std::string> labels = {"A", "A", "B", "B", "C", "C"};
        const SectorProjection proj = sector_projection(report, labels, 2);
        CHECK(std::abs(proj.mean_abs[0][0] - proj.mean_abs[0][1]) <= 1e-9);
        CHECK(std::abs(proj.mean_abs[0][0] - proj.mean_abs[0][2]) <= 1e-9);
        CHECK(proj.dominant[1] == "A");
    }
    SUBCASE("missing labels are an error") {
        std::vector<std::string> labels = {"A", "A", "B", "B", "C", ""};
        CHECK_THROWS_WITH_AS(sector_projection(report, labels, 2),
                             doctest::Contains("missing sector label"), ValidationError);
        labels.pop_back();
        CHECK_THROWS_WITH_AS(sector_projection(report, labels, 2),
                             doctest::Contains("does not match"), ValidationError);
    }
}
