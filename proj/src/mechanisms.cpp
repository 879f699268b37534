#include "dpgeom/mechanisms.hpp"

#include <cmath>

#include "dpgeom/errors.hpp"

namespace dpgeom {

namespace {

constexpr double kMembershipTol = 1e-9;

void check_points(const PointDatabase& db, double bound) {
    if (db.size() < 1) throw DomainError("mechanism: empty database");
    if (!db.points.allFinite()) throw InputError("mechanism: non-finite point");
    const double worst = db.points.colwise().norm().maxCoeff();
    if (worst > bound + kMembershipTol)
        throw DomainError("mechanism: point norm " + std::to_string(worst) + " exceeds bound " +
                          std::to_string(bound));
}

void check_body_in_unit_ball(const ConvexBody& body) {
    if (body.diameter() > 1.0 + kMembershipTol)
        throw DomainError("projection mechanism: body is not contained in the unit ball");
}

void check_points_in_body(const ConvexBody& body, const PointDatabase& db) {
    if (db.dim() != body.dim()) throw InputError("projection mechanism: dimension mismatch");
    for (Index i = 0; i < db.size(); ++i) {
        if (minkowski_norm(body, db.points.col(i)) > 1.0 + kMembershipTol)
            throw DomainError("projection mechanism: point " + std::to_string(i) +
                              " lies outside the body");
    }
}

}  // namespace

double sigma(double eps, double delta) {
    if (!(eps > 0.0) || !std::isfinite(eps)) throw DomainError("sigma: eps must be positive");
    if (!(delta > 0.0 && delta < 1.0)) throw DomainError("sigma: delta must lie in (0, 1)");
    return (0.5 * std::sqrt(eps) + std::sqrt(2.0 * std::log(1.0 / delta))) / eps;
}

PrivacyParams PrivacyParams::make(double eps, double delta) {
    return PrivacyParams{eps, delta, dpgeom::sigma(eps, delta)};
}

PrivacyParams composed(const PrivacyParams& inner, int calls) {
    const double eps = calls * inner.eps;
    const double delta = calls * inner.delta;
    return PrivacyParams{eps, delta, delta < 1.0 ? sigma(eps, delta) : 0.0};
}

MechanismResult gaussian_mechanism_with_noise(const PointDatabase& db, const PrivacyParams& params,
                                              double bound, const Vector& standard_noise) {
    if (!(bound > 0.0)) throw DomainError("gaussian_mechanism: bound must be positive");
    check_points(db, bound);
    if (standard_noise.size() != db.dim())
        throw InputError("gaussian_mechanism: noise dimension mismatch");
    const double n = static_cast<double>(db.size());
    const double scale = params.sigma * bound / n;
    MechanismResult out;
    out.output = db.mean() + scale * standard_noise;
    out.noise_scale = scale;
    return out;
}

MechanismResult gaussian_mechanism(const PointDatabase& db, const PrivacyParams& params,
                                   double bound, std::uint64_t seed) {
    Engine eng = make_engine(seed);
    auto out = gaussian_mechanism_with_noise(db, params, bound, standard_normal(eng, db.dim()));
    out.seed = seed;
    return out;
}

MechanismResult projection_mechanism_with_noise(const ConvexBody& body, const PointDatabase& db,
                                                const PrivacyParams& params,
                                                const Vector& standard_noise, double tol) {
    check_body_in_unit_ball(body);
    check_points_in_body(body, db);
    auto out = gaussian_mechanism_with_noise(db, params, 1.0, standard_noise);
    out.output = euclid_project(body, out.output, tol).point;
    return out;
}

MechanismResult projection_mechanism(const ConvexBody& body, const PointDatabase& db,
                                     const PrivacyParams& params, std::uint64_t seed, double tol) {
    Engine eng = make_engine(seed);
    auto out = projection_mechanism_with_noise(body, db, params, standard_normal(eng, db.dim()), tol);
    out.seed = seed;
    return out;
}

MeanPointAlgorithm exact_mean() {
    return [](const PointDatabase& db, std::uint64_t) { return db.mean(); };
}

MeanPointAlgorithm gaussian_algorithm(const PrivacyParams& params, double bound) {
    return [params, bound](const PointDatabase& db, std::uint64_t seed) {
        return gaussian_mechanism(db, params, bound, seed).output;
    };
}

MeanPointAlgorithm projection_algorithm(const ConvexBody& body, const PrivacyParams& params,
                                        double tol) {
    check_body_in_unit_ball(body);
    return [body, params, tol](const PointDatabase& db, std::uint64_t seed) {
        return projection_mechanism(body, db, params, seed, tol).output;
    };
}

QueryReleaseAlgorithm exact_answers(const Workload& workload) {
    return [workload](const ElementDatabase& db, std::uint64_t) -> Vector {
        if (db.empty()) return Vector::Zero(workload.queries());
        return evaluate(workload, db);
    };
}

QueryReleaseAlgorithm gaussian_answers(const Workload& workload, const PrivacyParams& params) {
    const double bound = workload.matrix().colwise().norm().maxCoeff();
    return [workload, params, bound](const ElementDatabase& db, std::uint64_t seed) -> Vector {
        if (db.empty()) return Vector::Zero(workload.queries());
        if (bound == 0.0) return evaluate(workload, db);
        Engine eng = make_engine(seed);
        const double scale = params.sigma * bound / static_cast<double>(db.size());
        return evaluate(workload, db) + scale * standard_normal(eng, workload.queries());
    };
}

QueryReleaseOutput query_release_from_meanpoint(const Workload& workload,
                                                const MeanPointAlgorithm& algorithm,
                                                const ElementDatabase& db, std::uint64_t seed) {
    if (db.empty()) throw DomainError("query_release_from_meanpoint: empty database");
    const Index m = workload.queries();
    const double root_m = std::sqrt(static_cast<double>(m));
    const double inv_root_m = 1.0 / root_m;
    PointDatabase points{Matrix(m, static_cast<Index>(db.size()))};
    for (std::size_t i = 0; i < db.size(); ++i) {
        const Index e = db.elements[i];
        if (e < 0 || e >= workload.universe_size())
            throw InputError("query_release_from_meanpoint: universe index out of range");
        points.points.col(static_cast<Index>(i)) = workload.matrix().col(e) * inv_root_m;
    }
    QueryReleaseOutput out;
    out.constructed_entries = static_cast<std::size_t>(m) * db.size();
    out.answers = root_m * algorithm(points, seed);
    return out;
}

Vector meanpoint_from_query_release(const Workload& workload,
                                    const QueryReleaseAlgorithm& algorithm,
                                    const PointDatabase& db, std::uint64_t seed) {
    if (db.size() < 1) throw DomainError("meanpoint_from_query_release: empty database");
    if (db.dim() != workload.queries())
        throw InputError("meanpoint_from_query_release: dimension mismatch");
    std::vector<SignedCombination> combos;
    combos.reserve(static_cast<std::size_t>(db.size()));
    for (Index i = 0; i < db.size(); ++i)
        combos.push_back(caratheodory_decompose(workload, db.points.col(i)));
    const auto signed_dbs = sample_signed_databases(combos, derive_seed(seed, {0}));
    const Vector plus = algorithm(signed_dbs.plus, derive_seed(seed, {1}));
    const Vector minus = algorithm(signed_dbs.minus, derive_seed(seed, {2}));
    // Q(D+) and Q(D-) are averages over their own sizes; reweight to the
    // common denominator n so that the output is (1/n) sum_i y_i.
    const double n = static_cast<double>(db.size());
    const double w_plus = static_cast<double>(signed_dbs.plus.size()) / n;
    const double w_minus = static_cast<double>(signed_dbs.minus.size()) / n;
    return (w_plus * plus - w_minus * minus) / std::sqrt(static_cast<double>(workload.queries()));
}

}  // namespace dpgeom
