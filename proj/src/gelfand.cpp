#include <bit>
#include <cmath>
#include <optional>

#include "dpgeom/analysis.hpp"
#include "dpgeom/errors.hpp"

namespace dpgeom {

namespace {

class Bitset {
public:
    explicit Bitset(std::size_t bits = 0) : words_((bits + 63) / 64, 0) {}

    void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }

    Bitset operator&(const Bitset& other) const {
        Bitset out;
        out.words_.resize(words_.size());
        for (std::size_t w = 0; w < words_.size(); ++w) out.words_[w] = words_[w] & other.words_[w];
        return out;
    }

    int count() const {
        int c = 0;
        for (auto w : words_) c += std::popcount(w);
        return c;
    }

    template <typename F>
    void for_each(F f) const {
        for (std::size_t w = 0; w < words_.size(); ++w) {
            std::uint64_t bits = words_[w];
            while (bits) {
                const int b = std::countr_zero(bits);
                f(w * 64 + static_cast<std::size_t>(b));
                bits &= bits - 1;
            }
        }
    }

private:
    std::vector<std::uint64_t> words_;
};

struct Vertex {
    Vector z;
    Bitset active;  // tight halfspaces among those processed so far
};

Index rank_of(const Matrix& rows) {
    if (rows.rows() == 0) return 0;
    Eigen::FullPivLU<Matrix> lu(rows);
    lu.setThreshold(1e-9);
    return lu.rank();
}

}  // namespace

Matrix symmetric_polytope_vertices(const Matrix& normals, double tol) {
    const Index d = normals.rows();
    if (d < 1) throw InputError("symmetric_polytope_vertices: empty dimension");

    // Halfspace 2i is <a_i, z> <= 1 and 2i + 1 is <-a_i, z> <= 1. Zero normals
    // never cut and are dropped.
    std::vector<Vector> halfspaces;
    for (Index i = 0; i < normals.cols(); ++i) {
        if (normals.col(i).norm() <= tol) continue;
        halfspaces.push_back(normals.col(i));
        halfspaces.push_back(-normals.col(i));
    }
    const std::size_t count = halfspaces.size();
    Matrix unit(static_cast<Index>(count), d);
    for (std::size_t h = 0; h < count; ++h) unit.row(static_cast<Index>(h)) = halfspaces[h].normalized().transpose();

    // Start from the parallelotope of d independent normals.
    std::vector<std::size_t> basis;
    Matrix chosen(0, d);
    for (std::size_t h = 0; h < count && static_cast<Index>(basis.size()) < d; h += 2) {
        Matrix trial(chosen.rows() + 1, d);
        trial.topRows(chosen.rows()) = chosen;
        trial.row(chosen.rows()) = unit.row(static_cast<Index>(h));
        if (rank_of(trial) > chosen.rows()) {
            chosen = std::move(trial);
            basis.push_back(h);
        }
    }
    if (static_cast<Index>(basis.size()) < d)
        throw DomainError("symmetric_polytope_vertices: normals do not span, section is unbounded");

    Matrix B(d, d);
    for (Index j = 0; j < d; ++j) B.row(j) = halfspaces[basis[static_cast<std::size_t>(j)]].transpose();
    const Eigen::PartialPivLU<Matrix> lu(B);

    std::vector<Vertex> vertices;
    std::vector<bool> processed(count, false);
    for (auto h : basis) processed[h] = processed[h + 1] = true;
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << d); ++s) {
        Vector rhs(d);
        Vertex v{Vector(), Bitset(count)};
        for (Index j = 0; j < d; ++j) {
            const bool negative = (s >> j) & 1;
            rhs[j] = negative ? -1.0 : 1.0;
            v.active.set(basis[static_cast<std::size_t>(j)] + (negative ? 1 : 0));
        }
        v.z = lu.solve(rhs);
        vertices.push_back(std::move(v));
    }

    auto adjacent = [&](const Bitset& common) {
        const int c = common.count();
        if (c < d - 1) return false;
        Matrix rows(c, d);
        Index r = 0;
        common.for_each([&](std::size_t h) { rows.row(r++) = unit.row(static_cast<Index>(h)); });
        return rank_of(rows) == d - 1;
    };

    for (std::size_t h = 0; h < count; ++h) {
        if (processed[h]) continue;
        processed[h] = true;
        const Vector& a = halfspaces[h];

        std::vector<std::size_t> inside, on, outside;
        std::vector<double> value(vertices.size());
        for (std::size_t i = 0; i < vertices.size(); ++i) {
            value[i] = a.dot(vertices[i].z) - 1.0;
            const double scaled = value[i] / a.norm();
            if (scaled < -tol)
                inside.push_back(i);
            else if (scaled > tol)
                outside.push_back(i);
            else
                on.push_back(i);
        }
        for (auto i : on) vertices[i].active.set(h);
        if (outside.empty()) continue;

        std::vector<Vertex> next;
        next.reserve(inside.size() + on.size());
        for (auto i : inside) next.push_back(vertices[i]);
        for (auto i : on) next.push_back(vertices[i]);
        for (auto u : inside) {
            for (auto v : outside) {
                Bitset common = vertices[u].active & vertices[v].active;
                if (!adjacent(common)) continue;
                const double t = -value[u] / (value[v] - value[u]);
                Vertex w{vertices[u].z + t * (vertices[v].z - vertices[u].z), std::move(common)};
                w.active.set(h);
                next.push_back(std::move(w));
            }
        }
        vertices = std::move(next);
    }

    Matrix out(d, static_cast<Index>(vertices.size()));
    for (std::size_t i = 0; i < vertices.size(); ++i) out.col(static_cast<Index>(i)) = vertices[i].z;
    return out;
}

GelfandProbe gelfand_probe_subspace(const ConvexBody& body, int k, const SubspaceBasis& subspace) {
    const Index m = body.dim();
    if (m > kGelfandMaxDim)
        throw DomainError("gelfand_probe: dimension " + std::to_string(m) + " exceeds cap " +
                          std::to_string(kGelfandMaxDim));
    if (k < 1 || k > m) throw DomainError("gelfand_probe: need 1 <= k <= m");
    if (subspace.ambient_dim() != m || subspace.dim() != m - k + 1)
        throw InputError("gelfand_probe: subspace must have dimension m - k + 1 in R^m");

    const double root = std::sqrt(static_cast<double>(m - k + 1));
    if (body.kind() == BodyKind::ball) {
        // (rB)° = B / r, and every central section of a ball is a ball.
        const double radius = 1.0 / body.scale();
        return GelfandProbe{k, subspace, radius, root / radius, Matrix()};
    }

    const ConvexBody v = to_vpolytope(body);
    const Matrix normals = subspace.columns().transpose() * (v.scale() * v.vertices());
    Matrix section = symmetric_polytope_vertices(normals);
    const double diameter = section.colwise().norm().maxCoeff();
    if (!(diameter > 0.0)) throw DomainError("gelfand_probe: degenerate section");
    return GelfandProbe{k, subspace, diameter, root / diameter, std::move(section)};
}

GelfandProbe gelfand_probe(const ConvexBody& body, int k, int subspaces, std::uint64_t seed) {
    if (subspaces < 1) throw DomainError("gelfand_probe: need at least one subspace");
    const Index m = body.dim();
    if (m > kGelfandMaxDim)
        throw DomainError("gelfand_probe: dimension " + std::to_string(m) + " exceeds cap " +
                          std::to_string(kGelfandMaxDim));
    if (k < 1 || k > m) throw DomainError("gelfand_probe: need 1 <= k <= m");
    std::optional<GelfandProbe> best;
    for (int j = 0; j < subspaces; ++j) {
        Engine eng = make_engine(seed, {static_cast<std::uint64_t>(j)});
        auto probe = gelfand_probe_subspace(body, k, SubspaceBasis::random(m, m - k + 1, eng));
        if (!best || probe.ratio > best->ratio) best = std::move(probe);
    }
    return std::move(*best);
}

}  // namespace dpgeom
