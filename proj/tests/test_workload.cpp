#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "dpgeom/errors.hpp"
#include "dpgeom/workload.hpp"

using namespace dpgeom;

namespace {

Workload random_workload(Index m, Index u, Engine& eng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Matrix M(m, u);
    for (Index i = 0; i < m; ++i)
        for (Index j = 0; j < u; ++j) M(i, j) = unit(eng);
    return Workload(M);
}

ElementDatabase random_db(Index universe, std::size_t n, Engine& eng) {
    std::uniform_int_distribution<Index> pick(0, universe - 1);
    ElementDatabase db;
    for (std::size_t i = 0; i < n; ++i) db.elements.push_back(pick(eng));
    return db;
}

}  // namespace

TEST_CASE("evaluate examples") {
    Matrix M(2, 2);
    M << 1, 0, 0.5, 0.5;
    const Workload w(M);
    const Vector q = evaluate(w, ElementDatabase{{0, 1}});
    CHECK(q[0] == 0.5);
    CHECK(q[1] == 0.5);
    CHECK(evaluate(w, ElementDatabase{{1}}) == M.col(1));
    CHECK_THROWS_AS(evaluate(w, ElementDatabase{}), DomainError);
    CHECK_THROWS_AS(evaluate(w, ElementDatabase{{2}}), InputError);
}

TEST_CASE("evaluate is permutation invariant and multiplicity linear, exactly") {
    Engine eng = make_engine(1);
    const Workload w = random_workload(5, 11, eng);
    for (int t = 0; t < 50; ++t) {
        ElementDatabase db = random_db(11, 1 + t % 17, eng);
        const Vector base = evaluate(w, db);
        ElementDatabase shuffled = db;
        std::shuffle(shuffled.elements.begin(), shuffled.elements.end(), eng);
        CHECK(evaluate(w, shuffled) == base);
        ElementDatabase tripled;
        for (int k = 0; k < 3; ++k)
            tripled.elements.insert(tripled.elements.end(), db.elements.begin(), db.elements.end());
        CHECK(evaluate(w, tripled) == base);
    }
}

TEST_CASE("workload validation") {
    Matrix bad(1, 2);
    bad << 0.5, 1.5;
    CHECK_THROWS_AS(Workload{bad}, InputError);
    CHECK_THROWS_AS(Workload(Matrix(0, 3)), InputError);
    CHECK_THROWS_AS(Workload(Matrix::Zero(1, 2), {"only-one"}), InputError);
}

TEST_CASE("one way marginals") {
    const Workload one = one_way_marginals(1);
    CHECK(one.matrix() == (Matrix(1, 2) << 0, 1).finished());
    const Workload two = one_way_marginals(2);
    CHECK(two.matrix() == (Matrix(2, 4) << 0, 1, 0, 1, 0, 0, 1, 1).finished());
    CHECK_THROWS_AS(one_way_marginals(17), DomainError);
    CHECK_THROWS_AS(one_way_marginals(0), DomainError);
}

TEST_CASE("sensitivity polytopes") {
    Engine eng = make_engine(2);
    SUBCASE("marginals") {
        // Columns are the 0/1 bit patterns, so conv{+-Q({e})} sits inside the
        // cube and touches it exactly in directions of constant sign. The
        // cube itself is the hull of the differences Q({e}) - Q({e'}).
        const int d = 5;
        const Workload w = one_way_marginals(d);
        const ConvexBody K = sensitivity_polytope(w, true);
        const ConvexBody Q = ConvexBody::scaled_cube(d);
        for (int t = 0; t < 100; ++t) {
            const Vector g = standard_normal(eng, d);
            CHECK(support_value(K, g) <= support_value(Q, g) + 1e-14);
            const Vector pos = g.cwiseAbs();
            CHECK(support_value(K, pos) == doctest::Approx(support_value(Q, pos)).epsilon(1e-14));
            double diff = 0.0;
            for (Index e = 0; e < w.universe_size(); ++e)
                for (Index f = 0; f < w.universe_size(); ++f)
                    diff = std::max(diff, g.dot(w.matrix().col(e) - w.matrix().col(f)) / std::sqrt(double(d)));
            CHECK(diff == doctest::Approx(support_value(Q, g)).epsilon(1e-14));
        }
    }
    SUBCASE("single 0/1 query gives a segment") {
        const ConvexBody K = sensitivity_polytope(Workload((Matrix(1, 2) << 0, 1).finished()), false);
        CHECK(support_value(K, Vector::Constant(1, -2.0)) == 2.0);
        CHECK(minkowski_norm(K, Vector::Constant(1, 0.5)) == doctest::Approx(0.5));
    }
    SUBCASE("identity gives the cross-polytope") {
        const ConvexBody K = sensitivity_polytope(Workload(Matrix::Identity(2, 2)), false);
        const ConvexBody B1 = ConvexBody::cross_polytope(2);
        for (int t = 0; t < 50; ++t) {
            const Vector x = standard_normal(eng, 2);
            CHECK(minkowski_norm(K, x) == doctest::Approx(minkowski_norm(B1, x)).epsilon(1e-12));
        }
    }
    SUBCASE("scaled body lies in the unit ball") {
        const Workload w = random_workload(6, 15, eng);
        CHECK(sensitivity_polytope(w, true).diameter() <= 1.0 + 1e-12);
    }
}

TEST_CASE("neighbor sensitivity") {
    Engine eng = make_engine(3);
    for (int t = 0; t < 200; ++t) {
        const Workload w = random_workload(1 + t % 5, 2 + t % 7, eng);
        const ConvexBody K = sensitivity_polytope(w, false);
        const ElementDatabase d = random_db(w.universe_size(), 1 + t % 9, eng);
        ElementDatabase neighbor = d;
        std::uniform_int_distribution<Index> pick(0, w.universe_size() - 1);
        if (t % 2 == 0)
            neighbor.elements.push_back(pick(eng));
        else if (d.size() > 1)
            neighbor.elements.erase(neighbor.elements.begin());
        else
            neighbor.elements.push_back(pick(eng));
        const double n = static_cast<double>(d.size());
        const double n2 = static_cast<double>(neighbor.size());
        const Vector diff = n * evaluate(w, d) - n2 * evaluate(w, neighbor);
        CHECK(minkowski_norm(K, diff) <= 1.0 + 1e-9);
    }
}
