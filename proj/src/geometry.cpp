#include "dpgeom/geometry.hpp"

#include <cmath>
#include <thread>

#include "dpgeom/errors.hpp"
#include "dpgeom/linprog.hpp"

namespace dpgeom {

namespace {

void require_finite(const Vector& v, const char* what) {
    if (!v.allFinite()) throw InputError(std::string(what) + ": non-finite entry");
}

void require_dim(const ConvexBody& body, const Vector& v, const char* what) {
    if (v.size() != body.dim())
        throw InputError(std::string(what) + ": expected dimension " + std::to_string(body.dim()) +
                         ", got " + std::to_string(v.size()));
    require_finite(v, what);
}

double unit_support(const ConvexBody& body, const Vector& d) {
    switch (body.kind()) {
        case BodyKind::ball:
            return d.norm();
        case BodyKind::scaled_cube:
            return d.lpNorm<1>() / std::sqrt(static_cast<double>(body.dim()));
        case BodyKind::cross_polytope:
            return d.lpNorm<Eigen::Infinity>();
        case BodyKind::vpolytope:
            return (body.vertices().transpose() * d).cwiseAbs().maxCoeff();
    }
    return 0.0;
}

// Gauge of the unscaled vpolytope via
//   min sum(lambda + mu)  s.t.  V lambda - V mu = x,  lambda, mu >= 0.
double vpolytope_unit_gauge(const Matrix& V, Vector x) {
    const double norm = x.lpNorm<Eigen::Infinity>();
    if (norm == 0.0) return 0.0;
    // Fix the sign so that ||x|| and ||-x|| follow the same pivot path.
    for (Index i = 0; i < x.size(); ++i) {
        if (x[i] != 0.0) {
            if (x[i] < 0.0) x = -x;
            break;
        }
    }
    x /= norm;
    const Index n = V.cols();
    Matrix A(V.rows(), 2 * n);
    A.leftCols(n) = V;
    A.rightCols(n) = -V;
    const auto sol = lp::minimize(A, x, Vector::Ones(2 * n));
    if (sol.status == lp::Status::infeasible) return kInfinity;
    if (sol.status != lp::Status::optimal)
        throw NumericalError("minkowski_norm: linear program did not terminate", 0.0);
    return sol.objective * norm;
}

double unit_gauge(const ConvexBody& body, const Vector& x) {
    switch (body.kind()) {
        case BodyKind::ball:
            return x.norm();
        case BodyKind::scaled_cube:
            return std::sqrt(static_cast<double>(body.dim())) * x.lpNorm<Eigen::Infinity>();
        case BodyKind::cross_polytope:
            return x.lpNorm<1>();
        case BodyKind::vpolytope:
            return vpolytope_unit_gauge(body.vertices(), x);
    }
    return 0.0;
}

struct ChunkStats {
    long count = 0;
    double mean = 0.0;
    double m2 = 0.0;
    bool infinite = false;
};

// Chan et al. pairwise merge; applied in chunk order so the result does not
// depend on how chunks were scheduled.
void merge(ChunkStats& into, const ChunkStats& other) {
    if (other.count == 0) return;
    into.infinite = into.infinite || other.infinite;
    if (into.count == 0) {
        into = other;
        return;
    }
    const double n1 = static_cast<double>(into.count);
    const double n2 = static_cast<double>(other.count);
    const double delta = other.mean - into.mean;
    const double n = n1 + n2;
    into.mean += delta * n2 / n;
    into.m2 += other.m2 + delta * delta * n1 * n2 / n;
    into.count += other.count;
}

template <typename Functional>
ChunkStats monte_carlo(Index dim, long samples, std::uint64_t seed, const MonteCarloOptions& opts,
                       Functional f) {
    const long chunk = std::max(1L, opts.chunk);
    const long chunks = (samples + chunk - 1) / chunk;
    std::vector<ChunkStats> stats(static_cast<std::size_t>(chunks));

    auto run_chunk = [&](long c) {
        Engine eng = make_engine(seed, {static_cast<std::uint64_t>(c)});
        const long begin = c * chunk;
        const long end = std::min(samples, begin + chunk);
        ChunkStats s;
        for (long i = begin; i < end; ++i) {
            const double v = f(standard_normal(eng, dim));
            if (!std::isfinite(v)) {
                s.infinite = true;
                continue;
            }
            ++s.count;
            const double delta = v - s.mean;
            s.mean += delta / static_cast<double>(s.count);
            s.m2 += delta * (v - s.mean);
        }
        stats[static_cast<std::size_t>(c)] = s;
    };

    const unsigned workers = std::max(1u, opts.workers);
    if (workers == 1 || chunks == 1) {
        for (long c = 0; c < chunks; ++c) run_chunk(c);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (long c = w; c < chunks; c += workers) run_chunk(c);
            });
        }
        for (auto& t : pool) t.join();
    }

    ChunkStats total;
    for (const auto& s : stats) merge(total, s);
    return total;
}

WidthEstimate to_estimate(const ChunkStats& s, double factor, std::uint64_t seed) {
    WidthEstimate est;
    est.samples = s.count;
    est.seed = seed;
    const double var = s.count > 1 ? s.m2 / static_cast<double>(s.count - 1) : 0.0;
    est.value = factor * s.mean;
    est.std_error = factor * std::sqrt(var / static_cast<double>(s.count));
    return est;
}

}  // namespace

std::string to_string(BodyKind kind) {
    switch (kind) {
        case BodyKind::vpolytope:
            return "vpolytope";
        case BodyKind::ball:
            return "ball";
        case BodyKind::scaled_cube:
            return "scaled_cube";
        case BodyKind::cross_polytope:
            return "cross_polytope";
    }
    return "unknown";
}

BodyKind body_kind_from_string(const std::string& name) {
    if (name == "vpolytope") return BodyKind::vpolytope;
    if (name == "ball") return BodyKind::ball;
    if (name == "scaled_cube") return BodyKind::scaled_cube;
    if (name == "cross_polytope") return BodyKind::cross_polytope;
    throw InputError("unknown body kind '" + name + "'");
}

ConvexBody::ConvexBody(BodyKind kind, Index dim, double scale, Matrix vertices)
    : kind_(kind), dim_(dim), scale_(scale), vertices_(std::move(vertices)) {
    if (dim_ < 1) throw InputError("ConvexBody: dimension must be >= 1");
    if (!(scale_ > 0.0) || !std::isfinite(scale_))
        throw InputError("ConvexBody: scale must be positive and finite");
    if (kind_ == BodyKind::vpolytope) {
        if (vertices_.cols() < 1) throw InputError("ConvexBody: vpolytope needs a vertex");
        if (!vertices_.allFinite()) throw InputError("ConvexBody: non-finite vertex coordinate");
    }
}

ConvexBody ConvexBody::vpolytope(Matrix vertices, double scale) {
    const Index dim = vertices.rows();
    return ConvexBody(BodyKind::vpolytope, dim, scale, std::move(vertices));
}

ConvexBody ConvexBody::ball(Index dim, double radius) {
    return ConvexBody(BodyKind::ball, dim, radius, Matrix());
}

ConvexBody ConvexBody::scaled_cube(Index dim, double scale) {
    return ConvexBody(BodyKind::scaled_cube, dim, scale, Matrix());
}

ConvexBody ConvexBody::cross_polytope(Index dim, double scale) {
    return ConvexBody(BodyKind::cross_polytope, dim, scale, Matrix());
}

ConvexBody ConvexBody::scaled(double factor) const {
    return ConvexBody(kind_, dim_, scale_ * factor, vertices_);
}

double ConvexBody::diameter() const {
    if (kind_ == BodyKind::vpolytope) return scale_ * vertices_.colwise().norm().maxCoeff();
    // Corners of Q^m and of B_1^m, and every boundary point of B_2^m, have norm 1.
    return scale_;
}

SubspaceBasis::SubspaceBasis(Matrix columns) : columns_(std::move(columns)) {
    if (columns_.cols() < 1 || columns_.cols() > columns_.rows())
        throw InputError("SubspaceBasis: need 1 <= dim(E) <= m");
    if (!columns_.allFinite()) throw InputError("SubspaceBasis: non-finite entry");
    const Matrix gram = columns_.transpose() * columns_;
    if ((gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff() > 1e-10)
        throw InputError("SubspaceBasis: columns are not orthonormal");
}

SubspaceBasis SubspaceBasis::random(Index ambient_dim, Index subspace_dim, Engine& eng) {
    if (subspace_dim < 1 || subspace_dim > ambient_dim)
        throw DomainError("SubspaceBasis::random: need 1 <= dim(E) <= m");
    Matrix g(ambient_dim, subspace_dim);
    for (Index j = 0; j < subspace_dim; ++j) g.col(j) = standard_normal(eng, ambient_dim);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(ambient_dim, subspace_dim);
    return SubspaceBasis(std::move(q));
}

SubspaceBasis SubspaceBasis::coordinate(Index ambient_dim, const std::vector<Index>& axes) {
    Matrix q = Matrix::Zero(ambient_dim, static_cast<Index>(axes.size()));
    for (std::size_t j = 0; j < axes.size(); ++j) {
        if (axes[j] < 0 || axes[j] >= ambient_dim)
            throw InputError("SubspaceBasis::coordinate: axis out of range");
        q(axes[j], static_cast<Index>(j)) = 1.0;
    }
    return SubspaceBasis(std::move(q));
}

double support_value(const ConvexBody& body, const Vector& direction) {
    require_dim(body, direction, "support_value");
    return body.scale() * unit_support(body, direction);
}

Vector lp_vertex_oracle(const ConvexBody& body, const Vector& direction) {
    require_dim(body, direction, "lp_vertex_oracle");
    const Index m = body.dim();
    const double r = body.scale();
    switch (body.kind()) {
        case BodyKind::ball: {
            const double norm = direction.norm();
            if (norm == 0.0) return r * Vector::Unit(m, 0);
            return (r / norm) * direction;
        }
        case BodyKind::scaled_cube: {
            const double h = r / std::sqrt(static_cast<double>(m));
            Vector x(m);
            for (Index i = 0; i < m; ++i) x[i] = direction[i] < 0.0 ? -h : h;
            return x;
        }
        case BodyKind::cross_polytope: {
            Index best = 0;
            for (Index i = 1; i < m; ++i)
                if (std::abs(direction[i]) > std::abs(direction[best])) best = i;
            return (direction[best] < 0.0 ? -r : r) * Vector::Unit(m, best);
        }
        case BodyKind::vpolytope: {
            const Vector dots = body.vertices().transpose() * direction;
            Index best = 0;
            for (Index i = 1; i < dots.size(); ++i)
                if (std::abs(dots[i]) > std::abs(dots[best])) best = i;
            const double sign = dots[best] < 0.0 ? -r : r;
            return sign * body.vertices().col(best);
        }
    }
    return Vector();
}

double minkowski_norm(const ConvexBody& body, const Vector& point) {
    require_dim(body, point, "minkowski_norm");
    return unit_gauge(body, point) / body.scale();
}

WidthEstimate gaussian_width(const ConvexBody& body, long samples, std::uint64_t seed,
                             const MonteCarloOptions& opts) {
    if (samples < 2) throw DomainError("gaussian_width: need at least 2 samples");
    const auto stats = monte_carlo(body.dim(), samples, seed, opts,
                                   [&](const Vector& g) { return unit_support(body, g); });
    return to_estimate(stats, body.scale(), seed);
}

WidthEstimate gaussian_norm_mean(const ConvexBody& body, long samples, std::uint64_t seed,
                                 const MonteCarloOptions& opts) {
    if (samples < 2) throw DomainError("gaussian_norm_mean: need at least 2 samples");
    if (body.kind() == BodyKind::vpolytope) {
        Eigen::FullPivLU<Matrix> lu(body.vertices());
        lu.setThreshold(1e-10);
        if (lu.rank() < body.dim())
            throw DomainError("gaussian_norm_mean: body is not full-dimensional, l(K) is infinite");
    }
    const auto stats = monte_carlo(body.dim(), samples, seed, opts,
                                   [&](const Vector& g) { return unit_gauge(body, g); });
    if (stats.infinite)
        throw DomainError("gaussian_norm_mean: sample outside the span of the body");
    // ||x||_{rK} = ||x||_K / r
    WidthEstimate est = to_estimate(stats, 1.0, seed);
    est.value /= body.scale();
    est.std_error /= body.scale();
    return est;
}

ConvexBody to_vpolytope(const ConvexBody& body, const ExpansionLimits& limits) {
    const Index m = body.dim();
    switch (body.kind()) {
        case BodyKind::vpolytope:
            return body;
        case BodyKind::ball:
            throw DomainError("to_vpolytope: a ball has no finite vertex set");
        case BodyKind::cross_polytope:
            return ConvexBody::vpolytope(Matrix::Identity(m, m), body.scale());
        case BodyKind::scaled_cube: {
            if (m > limits.max_cube_dim)
                throw DomainError("to_vpolytope: cube dimension " + std::to_string(m) +
                                  " exceeds expansion cap " + std::to_string(limits.max_cube_dim));
            // One representative per antipodal pair: first coordinate positive.
            const Index count = Index{1} << (m - 1);
            const double h = 1.0 / std::sqrt(static_cast<double>(m));
            Matrix V(m, count);
            for (Index c = 0; c < count; ++c) {
                V(0, c) = h;
                for (Index i = 1; i < m; ++i) V(i, c) = ((c >> (i - 1)) & 1) ? -h : h;
            }
            return ConvexBody::vpolytope(std::move(V), body.scale());
        }
    }
    return body;
}

ConvexBody apply_linear(const ConvexBody& body, const Matrix& map, const ExpansionLimits& limits) {
    if (map.cols() != body.dim())
        throw InputError("apply_linear: map has " + std::to_string(map.cols()) +
                         " columns, body dimension is " + std::to_string(body.dim()));
    if (!map.allFinite()) throw InputError("apply_linear: non-finite map entry");
    const ConvexBody v = to_vpolytope(body, limits);
    return ConvexBody::vpolytope(map * v.vertices(), v.scale());
}

ConvexBody project_subspace(const ConvexBody& body, const SubspaceBasis& basis,
                            const ExpansionLimits& limits) {
    if (basis.ambient_dim() != body.dim())
        throw InputError("project_subspace: basis lives in a different dimension");
    return apply_linear(body, basis.columns().transpose(), limits);
}

}  // namespace dpgeom
