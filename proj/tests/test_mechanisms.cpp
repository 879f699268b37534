#include <doctest.h>

#include <cmath>

#include <boost/math/distributions/chi_squared.hpp>

#include "dpgeom/errors.hpp"
#include "dpgeom/mechanisms.hpp"
#include "oracles.hpp"

using namespace dpgeom;

namespace {

Workload random_workload(Index m, Index u, Engine& eng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Matrix M(m, u);
    for (Index i = 0; i < m; ++i)
        for (Index j = 0; j < u; ++j) M(i, j) = unit(eng);
    return Workload(M);
}

PointDatabase vertex_db(const ConvexBody& body, Index n, Engine& eng) {
    PointDatabase db{Matrix(body.dim(), n)};
    for (Index i = 0; i < n; ++i) db.points.col(i) = lp_vertex_oracle(body, standard_normal(eng, body.dim()));
    return db;
}

}  // namespace

TEST_CASE("sigma examples") {
    CHECK(sigma(1.0, std::exp(-0.5)) == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(sigma(2.0, std::exp(-2.0)) == doctest::Approx((0.5 * std::sqrt(2.0) + 2.0) / 2.0).epsilon(1e-15));
    CHECK(std::abs(sigma(1.0, 1e-6) - oracle::sigma(1.0, 1e-6)) <= 1e-12);
    CHECK(sigma(1.0, 1e-6) == doctest::Approx(5.7565218).epsilon(1e-7));
    CHECK_THROWS_AS(sigma(0.0, 0.1), DomainError);
    CHECK_THROWS_AS(sigma(1.0, 0.0), DomainError);
    CHECK_THROWS_AS(sigma(1.0, 1.0), DomainError);
}

TEST_CASE("sigma is strictly decreasing in eps and delta") {
    for (int i = 0; i < 10; ++i) {
        for (int j = 0; j < 10; ++j) {
            const double eps = 0.1 + 0.3 * i;
            const double delta = std::pow(10.0, -1.0 - j);
            const double s = sigma(eps, delta);
            CHECK(sigma(eps * 1.01, delta) < s);
            CHECK(sigma(eps, delta * 1.01) < s);
            const auto p = PrivacyParams::make(eps, delta);
            CHECK(std::abs(p.sigma - (0.5 * std::sqrt(eps) + std::sqrt(2.0 * std::log(1.0 / delta))) / eps) <= 1e-12);
        }
    }
}

TEST_CASE("composition declares the summed budget") {
    const auto c = composed(PrivacyParams::make(0.5, 1e-7), 2);
    CHECK(c.eps == 1.0);
    CHECK(c.delta == 2e-7);
}

TEST_CASE("gaussian mechanism centers on the mean") {
    const auto params = PrivacyParams::make(1.0, 1e-6);
    Vector x(3);
    x << 0.6, -0.2, 0.1;
    PointDatabase db{Matrix(3, 2)};
    db.points.col(0) = x;
    db.points.col(1) = -x;
    const int trials = 10000;
    Vector sum = Vector::Zero(3);
    double noise = 0.0;
    for (int t = 0; t < trials; ++t) {
        const auto r = gaussian_mechanism(db, params, 1.0, derive_seed(1, {std::uint64_t(t)}));
        sum += r.output;
        noise = r.noise_scale;
    }
    CHECK(noise == doctest::Approx(params.sigma / 2.0).epsilon(1e-15));
    const Vector mean = sum / trials;
    for (Index i = 0; i < 3; ++i) CHECK(std::abs(mean[i]) <= 3.0 * noise / std::sqrt(double(trials)));
}

TEST_CASE("gaussian mechanism RMS error and per-coordinate variance") {
    const auto params = PrivacyParams::make(1.0, 1e-6);
    Engine eng = make_engine(2);
    const Index m = 16, n = 100;
    const ConvexBody ball = ConvexBody::ball(m);
    const PointDatabase db = vertex_db(ball, n, eng);
    const Vector mean = db.mean();
    const int trials = 10000;
    double sq = 0.0;
    Vector coord_sq = Vector::Zero(m);
    for (int t = 0; t < trials; ++t) {
        const Vector dev = gaussian_mechanism(db, params, 1.0, derive_seed(3, {std::uint64_t(t)})).output - mean;
        sq += dev.squaredNorm();
        coord_sq += dev.cwiseProduct(dev);
    }
    const double scale = params.sigma / n;
    CHECK(std::sqrt(sq / trials) == doctest::Approx(params.sigma * 4.0 / 100.0).epsilon(0.03));
    // Sum of squared standardized draws is chi-square with `trials` dof.
    boost::math::chi_squared chi(trials);
    const double lo = boost::math::quantile(chi, 0.0005);
    const double hi = boost::math::quantile(chi, 0.9995);
    for (Index i = 0; i < m; ++i) {
        const double stat = coord_sq[i] / (scale * scale);
        CHECK(stat >= lo);
        CHECK(stat <= hi);
    }
}

TEST_CASE("gaussian mechanism validation") {
    const auto params = PrivacyParams::make(1.0, 1e-6);
    PointDatabase db{Matrix::Constant(2, 1, 1.0)};
    CHECK_THROWS_AS(gaussian_mechanism(db, params, 1.0, 1), DomainError);
    CHECK_NOTHROW(gaussian_mechanism(db, params, std::sqrt(2.0), 1));
    CHECK_THROWS_AS(gaussian_mechanism(db, params, 0.0, 1), DomainError);
}

TEST_CASE("projection mechanism") {
    const auto params = PrivacyParams::make(1.0, 1e-6);
    Engine eng = make_engine(4);
    const ConvexBody body = ConvexBody::cross_polytope(8);
    const PointDatabase db = vertex_db(body, 20, eng);

    SUBCASE("zero noise returns the mean") {
        const auto r = projection_mechanism_with_noise(body, db, params, Vector::Zero(8), 1e-10);
        CHECK(r.output == db.mean());
    }
    SUBCASE("output is the projection of the coupled gaussian output") {
        const double tol = 1e-10;
        const ConvexBody vp = to_vpolytope(body);
        for (int t = 0; t < 50; ++t) {
            const auto seed = derive_seed(5, {std::uint64_t(t)});
            const Vector g = gaussian_mechanism(db, params, 1.0, seed).output;
            const Vector p = projection_mechanism(body, db, params, seed, tol).output;
            CHECK(p == euclid_project(body, g, tol).point);
            CHECK((p - db.mean()).norm() <= (g - db.mean()).norm() + std::sqrt(tol));
            const Vector pv = projection_mechanism(vp, db, params, seed, tol).output;
            CHECK((pv - p).squaredNorm() <= tol);
        }
    }
    SUBCASE("preconditions") {
        CHECK_THROWS_AS(projection_mechanism(ConvexBody::ball(8, 2.0), db, params, 1, 1e-10), DomainError);
        PointDatabase outside{Matrix::Constant(8, 1, 0.5)};
        CHECK_THROWS_AS(projection_mechanism(body, outside, params, 1, 1e-10), DomainError);
    }
}

TEST_CASE("query release through a mean point algorithm") {
    Engine eng = make_engine(6);
    const Workload w = random_workload(5, 9, eng);
    const ElementDatabase db{{0, 3, 3, 8, 1, 0}};
    const auto exact = query_release_from_meanpoint(w, exact_mean(), db, 1);
    CHECK((exact.answers - evaluate(w, db)).cwiseAbs().maxCoeff() <= 1e-15);
    CHECK(exact.constructed_entries == 5 * 6);

    const auto params = PrivacyParams::make(1.0, 1e-6);
    const auto inner = gaussian_algorithm(params, 1.0);
    PointDatabase points{Matrix(5, 6)};
    for (std::size_t i = 0; i < db.size(); ++i)
        points.points.col(static_cast<Index>(i)) = w.matrix().col(db.elements[i]) / std::sqrt(5.0);
    for (std::uint64_t s = 0; s < 20; ++s) {
        const Vector answers = query_release_from_meanpoint(w, inner, db, s).answers;
        const double query_err = (answers - evaluate(w, db)).norm() / std::sqrt(5.0);
        const double point_err = (inner(points, s) - points.mean()).norm();
        CHECK(query_err == doctest::Approx(point_err).epsilon(1e-12));
    }
    CHECK_THROWS_AS(query_release_from_meanpoint(w, exact_mean(), ElementDatabase{}, 1), DomainError);
}

TEST_CASE("mean point through a query release algorithm") {
    Engine eng = make_engine(7);
    const Workload w = random_workload(4, 7, eng);
    const auto exact = exact_answers(w);
    CHECK(exact(ElementDatabase{}, 0) == Vector::Zero(4));
    CHECK(gaussian_answers(w, PrivacyParams::make(1.0, 1e-6))(ElementDatabase{}, 0) == Vector::Zero(4));

    const Vector x = w.matrix().col(5) / 2.0;
    const PointDatabase same{x.replicate(1, 12)};
    const Vector out = meanpoint_from_query_release(w, exact, same, 3);
    CHECK((out - x).cwiseAbs().maxCoeff() <= 1e-15);

    const PointDatabase wrong{Matrix::Zero(3, 2)};
    CHECK_THROWS_AS(meanpoint_from_query_release(w, exact, wrong, 1), InputError);
}
