#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dpgeom/geometry.hpp"

namespace dpgeom {

/**
 * A workload of m linear queries over a finite universe U. Entry (q, e) of
 * the m x |U| matrix is q(e) in [0, 1]; column e is the answer vector Q({e})
 * of the single-element database {e}.
 */
class Workload {
public:
    explicit Workload(Matrix matrix, std::vector<std::string> labels = {});

    Index queries() const noexcept { return matrix_.rows(); }
    Index universe_size() const noexcept { return matrix_.cols(); }
    const Matrix& matrix() const noexcept { return matrix_; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }

private:
    Matrix matrix_;
    std::vector<std::string> labels_;
};

/// Multiset of universe indices.
struct ElementDatabase {
    std::vector<Index> elements;

    std::size_t size() const noexcept { return elements.size(); }
    bool empty() const noexcept { return elements.empty(); }
};

/// Multiset of points, one per column (m x n).
struct PointDatabase {
    Matrix points;

    Index size() const noexcept { return points.cols(); }
    Index dim() const noexcept { return points.rows(); }
    Vector mean() const;
};

/// Q(D), the per-query average over the database.
Vector evaluate(const Workload& workload, const ElementDatabase& db);

/// K = conv{+-Q({e})}; with `scaled`, K' = K / sqrt(m), which lies in B_2^m.
ConvexBody sensitivity_polytope(const Workload& workload, bool scaled);

/// The d one-way marginals over {0,1}^d: q_j(e) = bit j of e.
Workload one_way_marginals(int d, int max_d = 16);

/// x = (1/sqrt(m)) * sum_j weight_j * Q({element_j}) with sum_j |weight_j| = 1.
struct SignedCombination {
    struct Term {
        Index element;
        double weight;  // in [-1, 1]
    };
    std::vector<Term> terms;
    Vector target;

    double weight_l1() const;
    Vector reconstruct(const Workload& workload) const;
};

/// Writes a point of K' as a signed combination of at most m + 1 scaled
/// universe elements. Deterministic: bit-identical inputs give bit-identical
/// outputs. Throws DomainError when the point is outside K' by more than
/// `membership_tol` in gauge.
SignedCombination caratheodory_decompose(const Workload& workload, const Vector& point,
                                         double membership_tol = 1e-9);

/// Caratheodory support reduction. `atoms` holds one point per column and
/// `weights` are convex weights; returns convex weights with at most
/// dim + 1 nonzeros describing the same point. At each step the
/// eliminated atom is the one with the smallest ratio, highest index on ties.
Vector reduce_affine_support(const Matrix& atoms, Vector weights);

struct SignedDatabases {
    ElementDatabase plus;
    ElementDatabase minus;
};

/// For each combination independently draws term j with probability
/// |weight_j| and routes its element to D+ (weight >= 0) or D-. Point i uses
/// the RNG stream derived from (seed, i).
SignedDatabases sample_signed_databases(const std::vector<SignedCombination>& combos,
                                        std::uint64_t seed);

}  // namespace dpgeom
