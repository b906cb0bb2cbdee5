#include <catch2/catch_amalgamated.hpp>

#include <deckopt/stats.hpp>

#include <vector>

using namespace deckopt;

TEST_CASE("mean, sample variance and median") {
    CHECK(mean_of({2.0, 4.0, 6.0}) == Catch::Approx(4.0));
    CHECK(sample_variance({2.0, 4.0, 6.0}) == Catch::Approx(4.0)); // n-1 divisor
    CHECK(sample_variance({5.0, 5.0, 5.0}) == 0.0);
    CHECK_THROWS_AS(sample_variance({1.0}), InsufficientData);

    CHECK(median_of({3.0, 1.0, 2.0}) == 2.0);
    CHECK(median_of({4.0, 1.0, 3.0, 2.0}) == Catch::Approx(2.5));
    CHECK(median_of({7.0}) == 7.0);
    CHECK_THROWS_AS(median_of({}), InsufficientData);
}

TEST_CASE("equal-length fixture matches the reference implementation") {
    // Frozen oracle (computed with an independent reference): paired samples
    // shifted by exactly 0.01.
    std::vector<double> a = {0.61, 0.86, 0.93, 0.94};
    std::vector<double> b = {0.62, 0.87, 0.94, 0.95};
    WelchResult r = welch_test(a, b, 0.01);
    CHECK(r.t == Catch::Approx(-0.09173411178551388).margin(1e-9));
    CHECK(r.df == Catch::Approx(6.0).margin(1e-9));
    CHECK(r.p == Catch::Approx(0.9298953793546416).margin(1e-6));
    CHECK_FALSE(r.significant);
    CHECK_FALSE(r.degenerate);
}

TEST_CASE("unequal-variance fixture matches the reference implementation") {
    std::vector<double> a = {0.2, 0.4, 0.6, 0.8, 0.9};
    std::vector<double> b = {0.5, 0.5, 0.6, 0.7, 0.7};
    WelchResult r = welch_test(a, b, 0.01);
    CHECK(r.t == Catch::Approx(-0.147441956154897).margin(1e-9));
    CHECK(r.df == Catch::Approx(4.96131301289566).margin(1e-9));
    CHECK(r.p == Catch::Approx(0.888587516962184).margin(1e-6));
    CHECK_FALSE(r.significant);
}

TEST_CASE("clearly separated samples are significant at the 0.01 level") {
    std::vector<double> a = {0.10, 0.11, 0.12, 0.10, 0.11};
    std::vector<double> b = {0.90, 0.91, 0.89, 0.92, 0.90};
    WelchResult r = welch_test(a, b, 0.01);
    CHECK(r.p < 1e-6);
    CHECK(r.significant);
    CHECK(r.t < 0.0);
}

TEST_CASE("identical samples give p = 1 via the degenerate convention") {
    std::vector<double> a = {0.5, 0.5, 0.5};
    WelchResult r = welch_test(a, a, 0.01);
    CHECK(r.p == 1.0);
    CHECK(r.degenerate);
    CHECK_FALSE(r.significant);
    CHECK(r.t == 0.0);
    CHECK(r.df == 4.0); // n_a + n_b - 2 under the convention
}

TEST_CASE("zero variance with different means gives p = 0") {
    // Binary-exact values so the computed variance is exactly zero.
    std::vector<double> a = {0.25, 0.25, 0.25};
    std::vector<double> b = {0.75, 0.75, 0.75};
    WelchResult r = welch_test(a, b, 0.01);
    CHECK(r.p == 0.0);
    CHECK(r.degenerate);
    CHECK(r.significant);
}

TEST_CASE("equal nonzero samples through the regular path give p = 1") {
    // Nonzero variance but identical samples: t is exactly zero.
    std::vector<double> a = {0.3, 0.5, 0.7};
    WelchResult r = welch_test(a, a, 0.01);
    CHECK(r.t == 0.0);
    CHECK(r.p == 1.0);
    CHECK_FALSE(r.degenerate);
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(welch_test({1.0, 2.0}, {1.0, 2.0, 3.0}, 0.01), InvalidArgument);
    CHECK_THROWS_AS(welch_test({1.0}, {2.0}, 0.01), InsufficientData);
    CHECK_THROWS_AS(welch_test({}, {}, 0.01), InsufficientData);
}
