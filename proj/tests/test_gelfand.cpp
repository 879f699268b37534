#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "dpgeom/analysis.hpp"
#include "dpgeom/errors.hpp"

using namespace dpgeom;

namespace {

// Brute force: solve every d-subset of the 2N hyperplanes and keep the
// feasible, distinct solutions.
std::vector<Vector> brute_vertices(const Matrix& A) {
    const Index d = A.rows(), N = A.cols();
    std::vector<Vector> out;
    const Index H = 2 * N;
    std::vector<bool> mask(static_cast<std::size_t>(H), false);
    std::fill(mask.begin(), mask.begin() + d, true);
    do {
        Matrix B(d, d);
        Vector rhs(d);
        Index r = 0;
        for (Index h = 0; h < H; ++h) {
            if (!mask[static_cast<std::size_t>(h)]) continue;
            B.row(r) = (h % 2 ? -1.0 : 1.0) * A.col(h / 2).transpose();
            rhs[r++] = 1.0;
        }
        Eigen::FullPivLU<Matrix> lu(B);
        if (lu.rank() < d) continue;
        const Vector z = lu.solve(rhs);
        if ((A.transpose() * z).cwiseAbs().maxCoeff() > 1.0 + 1e-9) continue;
        if (std::none_of(out.begin(), out.end(), [&](const Vector& v) { return (v - z).norm() < 1e-7; }))
            out.push_back(z);
    } while (std::prev_permutation(mask.begin(), mask.end()));
    return out;
}

}  // namespace

TEST_CASE("vertex enumeration of a square and a hexagon") {
    const Matrix square = Matrix::Identity(2, 2);
    const Matrix V = symmetric_polytope_vertices(square);
    CHECK(V.cols() == 4);
    for (Index j = 0; j < V.cols(); ++j) CHECK(V.col(j).cwiseAbs().isApprox(Vector::Ones(2)));

    Matrix hex(2, 3);
    for (int j = 0; j < 3; ++j) hex.col(j) << std::cos(j * M_PI / 3), std::sin(j * M_PI / 3);
    CHECK(symmetric_polytope_vertices(hex).cols() == 6);

    Matrix flat(2, 2);
    flat << 1, 2, 0, 0;
    CHECK_THROWS_AS(symmetric_polytope_vertices(flat), DomainError);
}

TEST_CASE("vertex enumeration matches brute force") {
    Engine eng = make_engine(1);
    for (int trial = 0; trial < 12; ++trial) {
        const Index d = 2 + trial % 3;
        const Index N = d + 1 + trial % 4;
        Matrix A(d, N);
        for (Index j = 0; j < N; ++j) A.col(j) = standard_normal(eng, d);
        const Matrix V = symmetric_polytope_vertices(A);
        const auto ref = brute_vertices(A);
        CHECK(V.cols() == static_cast<Index>(ref.size()));
        for (Index j = 0; j < V.cols(); ++j) {
            CHECK((A.transpose() * V.col(j)).cwiseAbs().maxCoeff() <= 1.0 + 1e-9);
            const bool found = std::any_of(ref.begin(), ref.end(),
                                           [&](const Vector& v) { return (v - V.col(j)).norm() < 1e-7; });
            CHECK(found);
        }
    }
}

TEST_CASE("ball probes give sqrt(m - k + 1)") {
    for (int k = 1; k <= 8; ++k) {
        const auto p = gelfand_probe(ConvexBody::ball(8), k, 4, 10);
        CHECK(p.ratio == doctest::Approx(std::sqrt(9.0 - k)).epsilon(1e-12));
        CHECK(p.subspace.dim() == 9 - k);
        CHECK(p.diameter > 0.0);
    }
    // The polar of r B_2 is B_2 / r.
    const auto p = gelfand_probe(ConvexBody::ball(3, 0.5), 2, 2, 1);
    CHECK(p.diameter == doctest::Approx(2.0));
}

TEST_CASE("cross-polytope on coordinate subspaces has ratio 1") {
    const Index m = 8;
    for (int k = 1; k <= m; ++k) {
        std::vector<Index> axes;
        for (Index i = 0; i < m - k + 1; ++i) axes.push_back(i);
        const auto p = gelfand_probe_subspace(ConvexBody::cross_polytope(m), k, SubspaceBasis::coordinate(m, axes));
        CHECK(p.diameter == doctest::Approx(std::sqrt(double(m - k + 1))).epsilon(1e-12));
        CHECK(p.ratio == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("lines give the polar norm of the direction") {
    Engine eng = make_engine(2);
    Matrix V(4, 6);
    for (Index j = 0; j < 6; ++j) V.col(j) = standard_normal(eng, 4);
    const ConvexBody P = ConvexBody::vpolytope(V);
    for (int t = 0; t < 10; ++t) {
        const auto E = SubspaceBasis::random(4, 1, eng);
        const auto p = gelfand_probe_subspace(P, 4, E);
        CHECK(p.ratio == doctest::Approx(support_value(P, E.columns().col(0))).epsilon(1e-12));
    }
}

TEST_CASE("probe soundness") {
    Engine eng = make_engine(3);
    Matrix V(5, 8);
    for (Index j = 0; j < 8; ++j) V.col(j) = standard_normal(eng, 5);
    const ConvexBody P = ConvexBody::vpolytope(V).scaled(0.2);
    const auto few = gelfand_probe(P, 2, 3, 7);
    const auto many = gelfand_probe(P, 2, 12, 7);
    CHECK(many.ratio >= few.ratio);
    CHECK(few.diameter == few.section_vertices.colwise().norm().maxCoeff());
    CHECK(few.ratio == doctest::Approx(2.0 / few.diameter).epsilon(1e-15));
    // Section vertices lie in the polar: |<v_i, E z>| <= 1.
    const Matrix lifted = few.subspace.columns() * few.section_vertices;
    CHECK(((0.2 * V).transpose() * lifted).cwiseAbs().maxCoeff() <= 1.0 + 1e-9);
}

TEST_CASE("probe validation") {
    CHECK_THROWS_AS(gelfand_probe(ConvexBody::ball(13), 1, 1, 1), DomainError);
    CHECK_THROWS_AS(gelfand_probe(ConvexBody::ball(4), 5, 1, 1), DomainError);
    CHECK_THROWS_AS(gelfand_probe(ConvexBody::ball(4), 0, 1, 1), DomainError);
    CHECK_THROWS_AS(gelfand_probe(ConvexBody::ball(4), 1, 0, 1), DomainError);
    Matrix flat(3, 1);
    flat << 1, 0, 0;
    CHECK_THROWS_AS(gelfand_probe(ConvexBody::vpolytope(flat), 1, 1, 1), DomainError);
}
