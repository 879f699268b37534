#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dpgeom/geometry.hpp"
#include "dpgeom/workload.hpp"

namespace dpgeom {

/// Noise multiplier sigma(eps, delta) = (0.5 sqrt(eps) + sqrt(2 ln(1/delta))) / eps.
double sigma(double eps, double delta);

struct PrivacyParams {
    double eps;
    double delta;
    double sigma;

    static PrivacyParams make(double eps, double delta);
};

/// (eps, delta) declared for an algorithm built from `calls` invocations of
/// an (eps, delta) algorithm by basic composition. Not audited.
PrivacyParams composed(const PrivacyParams& inner, int calls);

struct MechanismResult {
    Vector output;
    double noise_scale = 0.0;  // per-coordinate standard deviation
    std::uint64_t seed = 0;
};

/// mean(D) + w / n with w ~ N(0, (sigma * bound)^2 I). Every point must have
/// Euclidean norm at most `bound`.
MechanismResult gaussian_mechanism(const PointDatabase& db, const PrivacyParams& params,
                                   double bound, std::uint64_t seed);

/// Same, with the standard-normal draw supplied by the caller.
MechanismResult gaussian_mechanism_with_noise(const PointDatabase& db, const PrivacyParams& params,
                                              double bound, const Vector& standard_noise);

/// Gaussian mechanism (bound 1) followed by Euclidean projection onto the
/// body, which must lie in the unit ball.
MechanismResult projection_mechanism(const ConvexBody& body, const PointDatabase& db,
                                     const PrivacyParams& params, std::uint64_t seed, double tol);

MechanismResult projection_mechanism_with_noise(const ConvexBody& body, const PointDatabase& db,
                                                const PrivacyParams& params,
                                                const Vector& standard_noise, double tol);

/// A mean point algorithm: points in, estimate of their mean out.
using MeanPointAlgorithm = std::function<Vector(const PointDatabase&, std::uint64_t seed)>;

/// A query release algorithm for a fixed workload. Must accept the empty
/// database.
using QueryReleaseAlgorithm = std::function<Vector(const ElementDatabase&, std::uint64_t seed)>;

MeanPointAlgorithm exact_mean();
MeanPointAlgorithm gaussian_algorithm(const PrivacyParams& params, double bound);
MeanPointAlgorithm projection_algorithm(const ConvexBody& body, const PrivacyParams& params,
                                        double tol);

/// Exact answers Q(D), with Q(empty) = 0.
QueryReleaseAlgorithm exact_answers(const Workload& workload);

/// Gaussian mechanism on the answer vectors: Q(D) + w / n with noise scaled
/// by the largest column norm of the workload. Q(empty) = 0 without noise.
QueryReleaseAlgorithm gaussian_answers(const Workload& workload, const PrivacyParams& params);

struct QueryReleaseOutput {
    Vector answers;
    std::size_t constructed_entries = 0;  // scalar entries written while building D'
};

/// Answers the workload by one call to a mean point algorithm on
/// D' = { Q({e}) / sqrt(m) : e in D }, rescaled by sqrt(m).
QueryReleaseOutput query_release_from_meanpoint(const Workload& workload,
                                                const MeanPointAlgorithm& algorithm,
                                                const ElementDatabase& db, std::uint64_t seed);

/// Estimates the mean of points in K' with two calls to a query release
/// algorithm on randomly signed element databases:
/// (1/sqrt(m)) (A(D+) - A(D-)).
Vector meanpoint_from_query_release(const Workload& workload,
                                    const QueryReleaseAlgorithm& algorithm,
                                    const PointDatabase& db, std::uint64_t seed);

}  // namespace dpgeom
