#include "finnet/dfa.hpp"

#include "finnet/common.hpp"
#include "finnet/util.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace finnet;

TEST_CASE("profile of a constant series is identically zero") {
    const std::vector<double> series(32, 3.7);
    for (double b : dfa_profile(series)) CHECK(b == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("profile of an alternating series telescopes") {
    std::vector<double> series;
    for (int k = 0; k < 20; ++k) series.push_back(k % 2 == 0 ? 1.0 : -1.0);
    const auto profile = dfa_profile(series);
    for (int k = 0; k < 20; ++k) {
        CHECK(profile[k] == (k % 2 == 0 ? 1.0 : 0.0));
    }
}

TEST_CASE("profile matches the prefix-sum oracle") {
    SplitMix rng(9);
    std::vector<double> series;
    for (int k = 0; k < 100; ++k) series.push_back(rng.next_gaussian());
    const auto profile = dfa_profile(series);
    double mean = 0.0;
    for (double v : series) mean += v;
    mean /= series.size();
    double acc = 0.0;
    for (std::size_t k = 0; k < series.size(); ++k) {
        acc += series[k] - mean;
        CHECK(profile[k] == doctest::Approx(acc).epsilon(1e-12));
    }
}

TEST_CASE("profile rejects short or non-finite series") {
    CHECK_THROWS_WITH_AS(dfa_profile(std::vector<double>(8, 1.0)), doctest::Contains("too short"),
                         ValidationError);
    std::vector<double> bad(20, 0.5);
    bad[7] = std::nan("");
    CHECK_THROWS_AS(dfa_profile(bad), ValidationError);
}

TEST_CASE("default scale grid is deterministic and bounded") {
    const auto g1 = default_scale_grid(4096);
    const auto g2 = default_scale_grid(4096);
    CHECK(g1 == g2);
    CHECK(g1.front() == 4);
    CHECK(g1.back() == 1024);
    CHECK(g1.size() >= 15);
    for (std::size_t k = 1; k < g1.size(); ++k) CHECK(g1[k] > g1[k - 1]);
    const auto tiny = default_scale_grid(16);
    CHECK(tiny == std::vector<int>{4});
    CHECK_THROWS_AS(default_scale_grid(15), ValidationError);
}

TEST_CASE("fluctuation function is zero for an exactly detrendable profile") {
    // B linear in t' (the mean-adjusted cumulative sum of a constant ramp is
    // quadratic, so feed a linear profile directly).
    std::vector<double> profile;
    for (int k = 1; k <= 64; ++k) profile.push_back(2.5 * k - 3.0);
    for (double f : fluctuation_function(profile, {4, 8, 16})) {
        CHECK(f <= 1e-10);
    }
    const std::vector<double> zeros(64, 0.0);
    for (double f : fluctuation_function(zeros, {4, 8, 16})) CHECK(f == 0.0);
}

TEST_CASE("fluctuation function matches the normal-equation oracle") {
    SplitMix rng(31);
    std::vector<double> series;
    for (int k = 0; k < 600; ++k) series.push_back(rng.next_gaussian() + 0.01 * k);
    const auto profile = dfa_profile(series);
    const auto scales = default_scale_grid(600);
    const auto fl = fluctuation_function(profile, scales);
    for (std::size_t k = 0; k < scales.size(); ++k) {
        const double ref = oracle::dfa_fluctuation(profile, scales[k]);
        CHECK(fl[k] == doctest::Approx(ref).epsilon(1e-10));
    }
}

TEST_CASE("fluctuation function validates scale bounds") {
    const std::vector<double> profile(64, 1.0);
    CHECK_THROWS_AS(fluctuation_function(profile, {3}), ValidationError);
    CHECK_THROWS_AS(fluctuation_function(profile, {17}), ValidationError);
}

TEST_CASE("fit_exponent recovers exact power laws") {
    std::vector<int> scales;
    std::vector<double> f_strict, f_scaled;
    for (int s = 4; s <= 256; s *= 2) {
        scales.push_back(s);
        f_strict.push_back(std::pow(s, 0.7));
        f_scaled.push_back(3.0 * std::pow(s, 1.0));
    }
    CHECK(fit_exponent(scales, f_strict, 4, 256).theta == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(fit_exponent(scales, f_scaled, 4, 256).theta == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("fit_exponent excludes zero points and errors when too few remain") {
    const std::vector<int> scales = {4, 8, 16, 32, 64};
    std::vector<double> f = {1.0, 2.0, 0.0, 8.0, 16.0};
    const ExponentFit fit = fit_exponent(scales, f, 4, 64);
    CHECK(fit.points_used == 4);
    CHECK(fit.zeros_excluded == 1);
    f = {1.0, 0.0, 0.0, 8.0, 16.0};
    CHECK_THROWS_WITH_AS(fit_exponent(scales, f, 4, 64), doctest::Contains("fewer than 4"),
                         ValidationError);
}

TEST_CASE("DFA is affine invariant") {
    SplitMix rng(77);
    std::vector<double> series, shifted;
    for (int k = 0; k < 512; ++k) {
        const double v = rng.next_gaussian();
        series.push_back(v);
        shifted.push_back(-2.5 * v + 7.0);
    }
    const auto scales = default_scale_grid(512);
    const auto fa = fluctuation_function(dfa_profile(series), scales);
    const auto fb = fluctuation_function(dfa_profile(shifted), scales);
    for (std::size_t k = 0; k < scales.size(); ++k) {
        CHECK(fb[k] == doctest::Approx(2.5 * fa[k]).epsilon(1e-9));
    }
    const double ta = fit_exponent(scales, fa, scales[2], scales[scales.size() - 3]).theta;
    const double tb = fit_exponent(scales, fb, scales[2], scales[scales.size() - 3]).theta;
    CHECK(ta == doctest::Approx(tb).epsilon(1e-9));
}

TEST_CASE("white noise and its integral hit the known exponent classes") {
    double theta_white = 0.0, theta_brown = 0.0;
    const int trials = 5;
    for (int trial = 0; trial < trials; ++trial) {
        std::vector<double> noise, walk;
        double acc = 0.0;
        for (int k = 0; k < 2048; ++k) {
            const double g = keyed_gaussian(500 + trial, 1, k);
            noise.push_back(g);
            acc += g;
            walk.push_back(acc);
        }
        theta_white += analyze_series(noise).theta;
        theta_brown += analyze_series(walk).theta;
    }
    theta_white /= trials;
    theta_brown /= trials;
    CHECK(theta_white > 0.43);
    CHECK(theta_white < 0.57);
    CHECK(theta_brown > 1.35);
    CHECK(theta_brown < 1.65);
}

TEST_CASE("crossover scan recovers a planted break and rejects pure laws") {
    // Piecewise log-log data: theta 0.75 below t = 25, 1.0 above, on the
    // default grid for T = 1600.
    const auto scales = default_scale_grid(1600);
    SUBCASE("planted break is found near 25") {
        std::vector<double> f;
        for (int s : scales) {
            const double base = s <= 25 ? std::pow(s, 0.75)
                                        : std::pow(25.0, 0.75) * std::pow(s / 25.0, 1.0);
            f.push_back(base);
        }
        const auto fit = fit_crossover(scales, f);
        REQUIRE(fit.has_value());
        CHECK(fit->t_c >= 20);
        CHECK(fit->t_c <= 30);
        CHECK(fit->theta_below == doctest::Approx(0.75).epsilon(0.05));
        CHECK(fit->theta_above == doctest::Approx(1.0).epsilon(0.05));
        CHECK(fit->sse_gain >= 0.2);
    }
    SUBCASE("exact single power law reports no crossover") {
        std::vector<double> f;
        for (int s : scales) f.push_back(std::pow(s, 0.8));
        CHECK_FALSE(fit_crossover(scales, f).has_value());
    }
    SUBCASE("too few points is an error") {
        const std::vector<int> few = {4, 8, 16, 40};
        const std::vector<double> f = {1, 2, 3, 4};
        CHECK_THROWS_WITH_AS(fit_crossover(few, f), doctest::Contains("insufficient points"),
                             ValidationError);
    }
    SUBCASE("narrow span is an error") {
        const std::vector<int> narrow = {4, 5, 6, 7, 8, 9, 10, 11, 12};
        std::vector<double> f;
        for (int s : narrow) f.push_back(std::pow(s, 0.6));
        CHECK_THROWS_WITH_AS(fit_crossover(narrow, f), doctest::Contains("decade"),
                             ValidationError);
    }
}

TEST_CASE("gap filling") {
    std::vector<std::optional<double>> series;
    for (int k = 0; k < 20; ++k) series.emplace_back(static_cast<double>(k % 5));
    series[3] = std::nullopt;
    const GapFill filled = fill_gaps(series);
    CHECK(filled.gap_fraction == doctest::Approx(1.0 / 20));
    // Mean of the 19 defined entries.
    double mean = 0.0;
    for (const auto& v : series) {
        if (v) mean += *v;
    }
    mean /= 19;
    CHECK(filled.values[3] == doctest::Approx(mean));

    for (int k = 0; k < 3; ++k) series[k] = std::nullopt;
    CHECK_THROWS_WITH_AS(fill_gaps(series), doctest::Contains("exceeds 10%"), ValidationError);
}

TEST_CASE("analyze_series honours fit-range overrides and gap accounting") {
    SplitMix rng(123);
    std::vector<std::optional<double>> series;
    for (int k = 0; k < 400; ++k) series.emplace_back(rng.next_gaussian());
    series[10] = std::nullopt;
    series[200] = std::nullopt;
    DfaOptions options;
    options.fit_range = {8, 50};
    const DfaResult result = analyze_series(series, options);
    CHECK(result.gap_fraction == doctest::Approx(2.0 / 400));
    CHECK(result.fit_range.first == 8);
    CHECK(result.fit_range.second == 50);
    CHECK(std::isfinite(result.theta));
}
