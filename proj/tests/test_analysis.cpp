#include <doctest.h>

#include <cmath>

#include "dpgeom/analysis.hpp"
#include "dpgeom/errors.hpp"
#include "oracles.hpp"

using namespace dpgeom;

TEST_CASE("bound report on the euclidean ball") {
    const auto r = bound_report(ConvexBody::ball(16), 1.0, 1e-6, 0.1, 100000, 1);
    const double ell = oracle::expected_l2_gamma(16);
    CHECK(r.gauss_upper == doctest::Approx(r.sigma * 4.0 / 0.1).epsilon(1e-14));
    CHECK(r.gauss_upper == doctest::Approx(230.26).epsilon(1e-4));
    CHECK(std::abs(r.proj_upper - r.sigma * ell / 0.01) <= 3.0 * r.sigma * r.ell_star.std_error / 0.01);
    CHECK(r.proj_upper == doctest::Approx(2267).epsilon(5e-3));
    CHECK(r.regime_ratio == doctest::Approx(0.98).epsilon(0.01));
    CHECK(r.gaussian_optimal);
    const double L = std::log(32.0);
    CHECK(r.meanpt_lower == doctest::Approx(r.sigma * r.ell_star.value / (L * L * 0.1)).epsilon(1e-14));
    CHECK(r.alpha_validity_threshold == doctest::Approx(r.ell_star.value / (4.0 * L * L)).epsilon(1e-14));
    for (double v : {r.gauss_upper, r.proj_upper, r.meanpt_lower, r.qr_lower, r.alpha_validity_threshold})
        CHECK(v >= 0.0);
}

TEST_CASE("bound report on the cross-polytope favors projection") {
    const auto r = bound_report(ConvexBody::cross_polytope(64), 1.0, 1e-6, 0.5, 100000, 2);
    const double ell = oracle::expected_max_abs(64);
    CHECK(std::abs(r.ell_star.value - ell) <= 3.0 * r.ell_star.std_error);
    CHECK(r.regime_ratio == doctest::Approx(ell / 8.0).epsilon(0.01));
    CHECK_FALSE(r.gaussian_optimal);
    CHECK(r.proj_upper < r.gauss_upper);
}

TEST_CASE("bounds are homogeneous under body scaling") {
    const ConvexBody K = ConvexBody::scaled_cube(6, 0.5);
    const auto a = bound_report(K, 1.0, 1e-6, 0.2, 5000, 3);
    const auto b = bound_report(K.scaled(1.8), 1.0, 1e-6, 0.2, 5000, 3);
    CHECK(b.ell_star.value == doctest::Approx(1.8 * a.ell_star.value).epsilon(1e-14));
    CHECK(b.proj_upper == doctest::Approx(1.8 * a.proj_upper).epsilon(1e-14));
    CHECK(b.meanpt_lower == doctest::Approx(1.8 * a.meanpt_lower).epsilon(1e-14));
    CHECK(b.gauss_upper == a.gauss_upper);
}

TEST_CASE("upper bounds decrease in alpha") {
    const ConvexBody K = ConvexBody::cross_polytope(10);
    double prev_g = kInfinity, prev_p = kInfinity;
    for (double alpha = 0.05; alpha < 0.95; alpha += 0.1) {
        const auto r = bound_report(K, 1.0, 1e-6, alpha, 2000, 4);
        CHECK(r.gauss_upper < prev_g);
        CHECK(r.proj_upper < prev_p);
        prev_g = r.gauss_upper;
        prev_p = r.proj_upper;
    }
}

TEST_CASE("bound report validation and threshold logic") {
    CHECK_THROWS_AS(bound_report(ConvexBody::ball(4, 1.5), 1.0, 1e-6, 0.1, 100, 1), DomainError);
    CHECK_THROWS_AS(bound_report(ConvexBody::ball(4), 1.0, 1e-6, 1.0, 100, 1), DomainError);
    CHECK_THROWS_AS(bound_report(ConvexBody::ball(4), 0.0, 1e-6, 0.1, 100, 1), DomainError);
    const auto small = bound_report(ConvexBody::ball(4), 1.0, 1e-6, 0.01, 2000, 1);
    CHECK(small.lower_bound_asserted);
    const auto big = bound_report(ConvexBody::ball(4), 1.0, 1e-6, 0.9, 2000, 1);
    CHECK_FALSE(big.lower_bound_asserted);
}

TEST_CASE("query release bounds") {
    SUBCASE("one way marginals") {
        const int d = 8;
        const auto r = query_release_bounds(one_way_marginals(d), 1.0, 1e-6, 0.1, 100000, 5);
        // l* of conv{+-b : b in {0,1}^d} is E max(sum g+, sum g-).
        const double closed = 0.5 * std::sqrt(2.0 / boost::math::constants::pi<double>()) * (d + std::sqrt(double(d)));
        CHECK(std::abs(r.ell_star.value - closed) <= 3.0 * r.ell_star.std_error);
        CHECK(r.regime_ratio == doctest::Approx(closed / d).epsilon(0.01));
        CHECK(r.gaussian_optimal);
        CHECK(r.proj_upper == doctest::Approx(r.sigma * r.ell_star.value / (std::sqrt(8.0) * 0.01)).epsilon(1e-14));
    }
    SUBCASE("identity workload") {
        const auto r = query_release_bounds(Workload(Matrix::Identity(16, 16)), 1.0, 1e-6, 0.1, 20000, 6);
        CHECK(std::abs(r.ell_star.value - oracle::expected_max_abs(16)) <= 3.0 * r.ell_star.std_error);
        CHECK_FALSE(r.gaussian_optimal);
        const double L = std::log(32.0);
        CHECK(r.qr_lower == doctest::Approx(r.sigma * std::pow(r.ell_star.value, 2) /
                                            (64.0 * std::pow(L, 4) * 0.1)).epsilon(1e-14));
    }
}

TEST_CASE("padding scaler") {
    CHECK(padding_scaler(100, 0.2, 0.1) == doctest::Approx(200));
    CHECK_THROWS_AS(padding_scaler(100, 0.2, 0.2), DomainError);
    CHECK_THROWS_AS(padding_scaler(100, 0.2, 0.3), DomainError);
    const double direct = padding_scaler(100, 0.2, 0.05);
    const double chained = padding_scaler(padding_scaler(100, 0.2, 0.1), 0.1, 0.05);
    CHECK(direct == doctest::Approx(chained).epsilon(1e-15));
}
