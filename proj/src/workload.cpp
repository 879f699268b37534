#include "dpgeom/workload.hpp"

#include <cmath>

#include "dpgeom/errors.hpp"

namespace dpgeom {

Workload::Workload(Matrix matrix, std::vector<std::string> labels)
    : matrix_(std::move(matrix)), labels_(std::move(labels)) {
    if (matrix_.rows() < 1 || matrix_.cols() < 1)
        throw InputError("Workload: need at least one query and one universe element");
    if (!matrix_.allFinite()) throw InputError("Workload: non-finite entry");
    if (matrix_.minCoeff() < 0.0 || matrix_.maxCoeff() > 1.0)
        throw InputError("Workload: entries must lie in [0, 1]");
    if (!labels_.empty() && static_cast<Index>(labels_.size()) != matrix_.cols())
        throw InputError("Workload: label count does not match universe size");
}

Vector PointDatabase::mean() const {
    if (points.cols() == 0) throw DomainError("PointDatabase::mean: empty database");
    return points.rowwise().sum() / static_cast<double>(points.cols());
}

Vector evaluate(const Workload& workload, const ElementDatabase& db) {
    if (db.empty()) throw DomainError("evaluate: empty database");
    // Multiplicities first, then a fixed-order weighted sum: the result depends
    // only on the multiset and on the ratios count/n, so permuting D or
    // replicating it k times gives bit-identical answers.
    std::vector<long> counts(static_cast<std::size_t>(workload.universe_size()), 0);
    for (Index e : db.elements) {
        if (e < 0 || e >= workload.universe_size())
            throw InputError("evaluate: universe index " + std::to_string(e) + " out of range");
        ++counts[static_cast<std::size_t>(e)];
    }
    const double n = static_cast<double>(db.size());
    Vector answer = Vector::Zero(workload.queries());
    for (Index e = 0; e < workload.universe_size(); ++e) {
        const long c = counts[static_cast<std::size_t>(e)];
        if (c != 0) answer += (static_cast<double>(c) / n) * workload.matrix().col(e);
    }
    return answer;
}

ConvexBody sensitivity_polytope(const Workload& workload, bool scaled) {
    const double scale = scaled ? 1.0 / std::sqrt(static_cast<double>(workload.queries())) : 1.0;
    return ConvexBody::vpolytope(workload.matrix(), scale);
}

Workload one_way_marginals(int d, int max_d) {
    if (d < 1) throw DomainError("one_way_marginals: need d >= 1");
    if (d > max_d)
        throw DomainError("one_way_marginals: d = " + std::to_string(d) + " exceeds cap " +
                          std::to_string(max_d));
    const Index universe = Index{1} << d;
    Matrix q(d, universe);
    for (Index e = 0; e < universe; ++e)
        for (int j = 0; j < d; ++j) q(j, e) = static_cast<double>((e >> j) & 1);
    return Workload(std::move(q));
}

}  // namespace dpgeom
