#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dpgeom/rng.hpp"

namespace dpgeom {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class BodyKind { vpolytope, ball, scaled_cube, cross_polytope };

std::string to_string(BodyKind kind);
BodyKind body_kind_from_string(const std::string& name);

/**
 * A centrally symmetric convex body in R^m.
 *
 * A vpolytope is the symmetric hull conv{+-v_i} of its stored vertices; only
 * one representative of each antipodal pair is kept and every oracle treats
 * both signs as present. The analytic kinds are
 *   ball            r * B_2^m
 *   scaled_cube     r * Q^m, with Q^m = [-1/sqrt(m), 1/sqrt(m)]^m
 *   cross_polytope  r * B_1^m
 * where r is the scale. Bodies are immutable after construction.
 */
class ConvexBody {
public:
    /// `vertices` holds one representative per column (m x N).
    static ConvexBody vpolytope(Matrix vertices, double scale = 1.0);
    static ConvexBody ball(Index dim, double radius = 1.0);
    static ConvexBody scaled_cube(Index dim, double scale = 1.0);
    static ConvexBody cross_polytope(Index dim, double scale = 1.0);

    BodyKind kind() const noexcept { return kind_; }
    Index dim() const noexcept { return dim_; }
    double scale() const noexcept { return scale_; }
    bool is_analytic() const noexcept { return kind_ != BodyKind::vpolytope; }

    /// Unscaled vertex representatives (vpolytope only; empty otherwise).
    const Matrix& vertices() const noexcept { return vertices_; }
    Index vertex_count() const noexcept { return vertices_.cols(); }

    ConvexBody scaled(double factor) const;

    /// max{ ||x||_2 : x in K }.
    double diameter() const;

private:
    ConvexBody(BodyKind kind, Index dim, double scale, Matrix vertices);

    BodyKind kind_;
    Index dim_;
    double scale_;
    Matrix vertices_;
};

/// Orthonormal basis (columns) of a subspace E of R^m.
class SubspaceBasis {
public:
    explicit SubspaceBasis(Matrix columns);

    static SubspaceBasis random(Index ambient_dim, Index subspace_dim, Engine& eng);
    static SubspaceBasis coordinate(Index ambient_dim, const std::vector<Index>& axes);

    const Matrix& columns() const noexcept { return columns_; }
    Index ambient_dim() const noexcept { return columns_.rows(); }
    Index dim() const noexcept { return columns_.cols(); }

private:
    Matrix columns_;
};

struct WidthEstimate {
    double value = 0.0;
    double std_error = 0.0;
    long samples = 0;
    std::uint64_t seed = 0;
};

struct MonteCarloOptions {
    unsigned workers = 1;
    long chunk = 4096;  // samples per RNG substream
};

double support_value(const ConvexBody& body, const Vector& direction);

/// A maximizer of <x, direction> over the body. For vpolytopes ties go to the
/// lowest vertex index, then to +v over -v.
Vector lp_vertex_oracle(const ConvexBody& body, const Vector& direction);

/// Gauge ||x||_K; +infinity when x is outside the linear span of K.
double minkowski_norm(const ConvexBody& body, const Vector& point);

/// Monte Carlo estimate of the Gaussian mean width l*(K) = E h_K(g).
WidthEstimate gaussian_width(const ConvexBody& body, long samples, std::uint64_t seed,
                             const MonteCarloOptions& opts = {});

/// Monte Carlo estimate of l(K) = E ||g||_K. Refuses bodies that are not
/// full-dimensional, for which l(K) is infinite.
WidthEstimate gaussian_norm_mean(const ConvexBody& body, long samples, std::uint64_t seed,
                                 const MonteCarloOptions& opts = {});

struct ProjectionOptions {
    long max_iterations = 0;  // 0 selects 50 * m * vertex_count
};

struct ProjectionResult {
    Vector point;
    double gap = 0.0;  // conditional-gradient duality gap at `point`
    long iterations = 0;
};

/// Euclidean projection onto the body. The returned point is within squared
/// distance `tol` of the exact projection; for vpolytopes this is certified by
/// a duality gap <= tol. Throws NumericalError when the iteration cap is hit.
ProjectionResult euclid_project(const ConvexBody& body, const Vector& point, double tol,
                                const ProjectionOptions& opts = {});

struct ExpansionLimits {
    Index max_cube_dim = 16;
};

/// Explicit vertex form of the body. Balls cannot be expanded.
ConvexBody to_vpolytope(const ConvexBody& body, const ExpansionLimits& limits = {});

/// T(K) for a k x m matrix T.
ConvexBody apply_linear(const ConvexBody& body, const Matrix& map,
                        const ExpansionLimits& limits = {});

/// Pi_E(K) written in the coordinates of the basis of E.
ConvexBody project_subspace(const ConvexBody& body, const SubspaceBasis& basis,
                            const ExpansionLimits& limits = {});

}  // namespace dpgeom
