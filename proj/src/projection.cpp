#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <vector>

#include "dpgeom/errors.hpp"
#include "dpgeom/geometry.hpp"

namespace dpgeom {

namespace {

std::string gap_text(double gap) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", gap);
    return buf;
}

// Projection onto { x : ||x||_1 <= radius } by sorting magnitudes
// (Duchi, Shalev-Shwartz, Singer, Chandra 2008).
Vector project_l1_ball(const Vector& y, double radius) {
    if (y.lpNorm<1>() <= radius) return y;
    std::vector<double> u(y.size());
    for (Index i = 0; i < y.size(); ++i) u[static_cast<std::size_t>(i)] = std::abs(y[i]);
    std::sort(u.begin(), u.end(), std::greater<>());
    double cumulative = 0.0;
    double theta = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) {
        cumulative += u[j];
        const double t = (cumulative - radius) / static_cast<double>(j + 1);
        if (u[j] - t > 0.0) theta = t;
    }
    Vector x(y.size());
    for (Index i = 0; i < y.size(); ++i) {
        const double mag = std::max(std::abs(y[i]) - theta, 0.0);
        x[i] = y[i] < 0.0 ? -mag : mag;
    }
    return x;
}

struct Atom {
    Index id;  // 2 * vertex + (0 for +v, 1 for -v)
    Vector shifted;  // atom - target
};

// Minimum-norm point of the affine hull of the shifted atoms, as affine
// weights. Solved as least squares in the differences p_j - p_0.
Vector affine_min_norm_weights(const std::vector<Atom>& atoms) {
    const Index k = static_cast<Index>(atoms.size());
    Vector w = Vector::Zero(k);
    if (k == 1) {
        w[0] = 1.0;
        return w;
    }
    const Vector& p0 = atoms[0].shifted;
    Matrix D(p0.size(), k - 1);
    for (Index j = 1; j < k; ++j) D.col(j - 1) = atoms[static_cast<std::size_t>(j)].shifted - p0;
    const Vector t = D.colPivHouseholderQr().solve(-p0);
    w[0] = 1.0 - t.sum();
    w.tail(k - 1) = t;
    return w;
}

Vector combine(const std::vector<Atom>& atoms, const Vector& weights) {
    Vector x = Vector::Zero(atoms.front().shifted.size());
    for (std::size_t j = 0; j < atoms.size(); ++j)
        x += weights[static_cast<Index>(j)] * atoms[j].shifted;
    return x;
}

// Wolfe's minimum-norm-point method on conv{atoms - target}: a fully
// corrective conditional-gradient scheme driven by the vertex oracle.
ProjectionResult wolfe_project(const ConvexBody& body, const Vector& target, double tol,
                               long max_iterations) {
    constexpr double kWeightTol = 1e-14;

    const Matrix& V = body.vertices();
    // Same maximizer and tie-breaking as lp_vertex_oracle, keeping the index.
    auto make_atom = [&](const Vector& direction) {
        const Vector dots = V.transpose() * direction;
        Index best = 0;
        for (Index i = 1; i < dots.size(); ++i)
            if (std::abs(dots[i]) > std::abs(dots[best])) best = i;
        const bool negative = dots[best] < 0.0;
        const double sign = negative ? -body.scale() : body.scale();
        return Atom{2 * best + (negative ? 1 : 0), sign * V.col(best) - target};
    };

    std::vector<Atom> active{make_atom(target)};
    Vector weights = Vector::Ones(1);
    Vector x = active.front().shifted;
    long iterations = 0;
    double gap = kInfinity;

    while (true) {
        // Frank-Wolfe vertex for f(z) = ||z - target||^2 at z = target + x.
        Atom s = make_atom(-x);
        gap = 2.0 * (x.squaredNorm() - x.dot(s.shifted));
        if (gap <= tol) break;
        if (iterations >= max_iterations)
            throw NumericalError("euclid_project: no convergence, duality gap " + gap_text(gap),
                                 gap);
        const bool already_active = std::any_of(active.begin(), active.end(),
                                                [&](const Atom& a) { return a.id == s.id; });
        if (already_active)
            throw NumericalError("euclid_project: stalled at duality gap " + gap_text(gap), gap);

        active.push_back(std::move(s));
        weights.conservativeResize(static_cast<Index>(active.size()));
        weights[weights.size() - 1] = 0.0;

        while (true) {
            ++iterations;
            const Vector affine = affine_min_norm_weights(active);
            if (affine.minCoeff() > kWeightTol) {
                weights = affine;
                break;
            }
            // Move from the current convex weights towards the affine minimizer
            // until the first weight hits zero, then drop the zeroed atoms.
            double theta = 1.0;
            for (Index j = 0; j < affine.size(); ++j) {
                if (affine[j] <= kWeightTol) {
                    const double denom = weights[j] - affine[j];
                    if (denom > 0.0) theta = std::min(theta, weights[j] / denom);
                }
            }
            weights = theta * affine + (1.0 - theta) * weights;
            std::vector<Atom> kept;
            std::vector<double> kept_w;
            for (std::size_t j = 0; j < active.size(); ++j) {
                if (weights[static_cast<Index>(j)] > kWeightTol) {
                    kept.push_back(std::move(active[j]));
                    kept_w.push_back(weights[static_cast<Index>(j)]);
                }
            }
            if (kept.empty())
                throw NumericalError("euclid_project: active set collapsed", gap);
            active = std::move(kept);
            weights = Eigen::Map<Vector>(kept_w.data(), static_cast<Index>(kept_w.size()));
            weights /= weights.sum();
            if (iterations >= max_iterations) break;
        }
        x = combine(active, weights);
    }
    return ProjectionResult{target + x, std::max(gap, 0.0), iterations};
}

}  // namespace

ProjectionResult euclid_project(const ConvexBody& body, const Vector& point, double tol,
                                const ProjectionOptions& opts) {
    if (point.size() != body.dim()) throw InputError("euclid_project: dimension mismatch");
    if (!point.allFinite()) throw InputError("euclid_project: non-finite point");
    if (!(tol > 0.0)) throw DomainError("euclid_project: tol must be positive");

    const Index m = body.dim();
    const double r = body.scale();
    switch (body.kind()) {
        case BodyKind::ball: {
            const double norm = point.norm();
            if (norm <= r) return {point, 0.0, 0};
            return {(r / norm) * point, 0.0, 0};
        }
        case BodyKind::scaled_cube: {
            const double h = r / std::sqrt(static_cast<double>(m));
            return {point.cwiseMax(-h).cwiseMin(h), 0.0, 0};
        }
        case BodyKind::cross_polytope:
            return {project_l1_ball(point, r), 0.0, 0};
        case BodyKind::vpolytope:
            break;
    }

    if (minkowski_norm(body, point) <= 1.0) return {point, 0.0, 0};
    const long cap = opts.max_iterations > 0 ? opts.max_iterations : 50 * m * body.vertex_count();
    return wolfe_project(body, point, tol, cap);
}

}  // namespace dpgeom
