#include <algorithm>
#include <cmath>

#include "dpgeom/errors.hpp"
#include "dpgeom/linprog.hpp"
#include "dpgeom/workload.hpp"

namespace dpgeom {

namespace {

struct SignedAtom {
    Index element;
    bool negative;
    double weight;  // >= 0
};

bool atom_order(const SignedAtom& a, const SignedAtom& b) {
    if (a.element != b.element) return a.element < b.element;
    return !a.negative && b.negative;
}

}  // namespace

double SignedCombination::weight_l1() const {
    double s = 0.0;
    for (const auto& t : terms) s += std::abs(t.weight);
    return s;
}

Vector SignedCombination::reconstruct(const Workload& workload) const {
    Vector x = Vector::Zero(workload.queries());
    for (const auto& t : terms) x += t.weight * workload.matrix().col(t.element);
    return x / std::sqrt(static_cast<double>(workload.queries()));
}

Vector reduce_affine_support(const Matrix& atoms, Vector weights) {
    if (atoms.cols() != weights.size()) throw InputError("reduce_affine_support: size mismatch");
    const Index d = atoms.rows();
    while (true) {
        std::vector<Index> active;
        for (Index j = 0; j < weights.size(); ++j)
            if (weights[j] > 0.0) active.push_back(j);
        const Index k = static_cast<Index>(active.size());
        if (k <= d + 1) return weights;

        Matrix lifted(d + 1, k);
        for (Index c = 0; c < k; ++c) {
            lifted.col(c).head(d) = atoms.col(active[static_cast<std::size_t>(c)]);
            lifted(d, c) = 1.0;
        }
        // More than d + 1 lifted columns are always linearly dependent.
        Eigen::FullPivLU<Matrix> lu(lifted);
        const Matrix kernel = lu.kernel();
        Vector dir = kernel.col(0);
        if (dir.maxCoeff() <= 0.0) dir = -dir;

        Index drop = -1;
        double step = kInfinity;
        for (Index c = 0; c < k; ++c) {
            if (dir[c] <= 1e-14) continue;
            const double ratio = weights[active[static_cast<std::size_t>(c)]] / dir[c];
            if (ratio <= step * (1.0 + 1e-12)) {  // later index wins ties
                step = std::min(step, ratio);
                drop = c;
            }
        }
        if (drop < 0) throw NumericalError("reduce_affine_support: no admissible step", 0.0);
        for (Index c = 0; c < k; ++c) {
            double& w = weights[active[static_cast<std::size_t>(c)]];
            w = std::max(0.0, w - step * dir[c]);
        }
        weights[active[static_cast<std::size_t>(drop)]] = 0.0;
    }
}

SignedCombination caratheodory_decompose(const Workload& workload, const Vector& point,
                                         double membership_tol) {
    const Index m = workload.queries();
    const Index universe = workload.universe_size();
    if (point.size() != m) throw InputError("caratheodory_decompose: dimension mismatch");
    if (!point.allFinite()) throw InputError("caratheodory_decompose: non-finite point");

    const double inv_sqrt_m = 1.0 / std::sqrt(static_cast<double>(m));
    const Matrix scaled = workload.matrix() * inv_sqrt_m;
    Matrix A(m, 2 * universe);
    A.leftCols(universe) = scaled;
    A.rightCols(universe) = -scaled;

    // Gauge-minimal signed weights; Bland pivoting makes this a fixed function
    // of the point.
    const auto sol = lp::minimize(A, point, Vector::Ones(2 * universe));
    if (sol.status == lp::Status::infeasible)
        throw DomainError("caratheodory_decompose: point is outside the span of K'");
    if (sol.status != lp::Status::optimal)
        throw NumericalError("caratheodory_decompose: linear program did not terminate", 0.0);
    if (sol.objective > 1.0 + membership_tol)
        throw DomainError("caratheodory_decompose: point has gauge " + std::to_string(sol.objective) +
                          " > 1 in K'");

    std::vector<Index> support;
    for (Index j = 0; j < sol.x.size(); ++j)
        if (sol.x[j] > 0.0) support.push_back(j);

    // Polish the basic weights against the original columns.
    Vector w(static_cast<Index>(support.size()));
    for (std::size_t i = 0; i < support.size(); ++i) w[static_cast<Index>(i)] = sol.x[support[i]];
    if (!support.empty()) {
        Matrix S(m, static_cast<Index>(support.size()));
        for (std::size_t i = 0; i < support.size(); ++i) S.col(static_cast<Index>(i)) = A.col(support[i]);
        const Vector polished = S.colPivHouseholderQr().solve(point);
        if (polished.minCoeff() >= 0.0 && (S * polished - point).norm() <= (S * w - point).norm())
            w = polished;
    }

    std::vector<SignedAtom> atoms;
    for (std::size_t i = 0; i < support.size(); ++i) {
        const Index j = support[i];
        atoms.push_back({j % universe, j >= universe, w[static_cast<Index>(i)]});
    }
    std::sort(atoms.begin(), atoms.end(), atom_order);

    // Top up sum|alpha| to one with a cancelling +-Q({e}) pair on the first
    // element in use (element 0 when the point is the origin).
    double total = 0.0;
    for (const auto& a : atoms) total += a.weight;
    const double slack = 1.0 - total;
    if (slack > 0.0) {
        if (atoms.empty()) {
            atoms.push_back({0, false, 0.5 * slack});
            atoms.push_back({0, true, 0.5 * slack});
        } else {
            SignedAtom& first = atoms.front();
            first.weight += 0.5 * slack;
            auto twin = std::find_if(atoms.begin(), atoms.end(), [&](const SignedAtom& a) {
                return a.element == first.element && a.negative != first.negative;
            });
            if (twin != atoms.end()) {
                twin->weight += 0.5 * slack;
            } else {
                atoms.push_back({first.element, !first.negative, 0.5 * slack});
            }
            std::sort(atoms.begin(), atoms.end(), atom_order);
        }
    }

    if (static_cast<Index>(atoms.size()) > m + 1) {
        Matrix columns(m, static_cast<Index>(atoms.size()));
        Vector weights(static_cast<Index>(atoms.size()));
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            const Index c = static_cast<Index>(i);
            columns.col(c) = (atoms[i].negative ? -1.0 : 1.0) * scaled.col(atoms[i].element);
            weights[c] = atoms[i].weight;
        }
        weights = reduce_affine_support(columns, weights);
        std::vector<SignedAtom> kept;
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            if (weights[static_cast<Index>(i)] > 0.0) {
                kept.push_back(atoms[i]);
                kept.back().weight = weights[static_cast<Index>(i)];
            }
        }
        atoms = std::move(kept);
    }

    SignedCombination combo;
    combo.target = point;
    for (const auto& a : atoms) combo.terms.push_back({a.element, a.negative ? -a.weight : a.weight});

    const double l1 = combo.weight_l1();
    const double residual = (combo.reconstruct(workload) - point).lpNorm<Eigen::Infinity>();
    if (std::abs(l1 - 1.0) > 1e-9 || residual > 1e-9)
        throw NumericalError("caratheodory_decompose: decomposition failed verification", residual);
    return combo;
}

SignedDatabases sample_signed_databases(const std::vector<SignedCombination>& combos,
                                        std::uint64_t seed) {
    SignedDatabases out;
    for (std::size_t i = 0; i < combos.size(); ++i) {
        const auto& terms = combos[i].terms;
        if (terms.empty()) throw InputError("sample_signed_databases: empty combination");
        Engine eng = make_engine(seed, {static_cast<std::uint64_t>(i)});
        const double total = combos[i].weight_l1();
        const double u = std::uniform_real_distribution<double>(0.0, total)(eng);
        std::size_t pick = terms.size() - 1;
        double cumulative = 0.0;
        for (std::size_t j = 0; j < terms.size(); ++j) {
            cumulative += std::abs(terms[j].weight);
            if (u < cumulative) {
                pick = j;
                break;
            }
        }
        const auto& t = terms[pick];
        (t.weight >= 0.0 ? out.plus : out.minus).elements.push_back(t.element);
    }
    return out;
}

}  // namespace dpgeom
