#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dpgeom/mechanisms.hpp"

namespace dpgeom {

/// How candidate worst-case databases are chosen when estimating
/// sup_D of the error. The maximum over a finite suite is a lower bound on
/// the true supremum.
enum class Adversary { single_vertex, random_vertices, max_width_direction };

std::string to_string(Adversary adversary);
Adversary adversary_from_string(const std::string& name);

struct ErrorEstimate {
    double rms_error = 0.0;
    double std_error = 0.0;
    long trials = 0;
    Adversary adversary = Adversary::single_vertex;
    std::size_t worst_candidate = 0;
};

std::vector<PointDatabase> adversary_databases(const ConvexBody& body, long n, Adversary adversary,
                                               std::uint64_t seed);
std::vector<ElementDatabase> adversary_databases(const Workload& workload, long n,
                                                 Adversary adversary, std::uint64_t seed);

/// Mean point error (E ||A(D) - mean(D)||^2)^{1/2}, maximized over the
/// adversary's candidates. Trial t on candidate c runs with the seed derived
/// from (seed, c, t), so runs at different n share random numbers.
ErrorEstimate measure_error(const ConvexBody& body, const MeanPointAlgorithm& algorithm, long n,
                            long trials, Adversary adversary, std::uint64_t seed);

/// Query release error (E (1/m) ||A(D) - Q(D)||^2)^{1/2}.
ErrorEstimate measure_error(const Workload& workload, const QueryReleaseAlgorithm& algorithm,
                            long n, long trials, Adversary adversary, std::uint64_t seed);

struct SampleComplexity {
    bool bounded = false;
    long n = 0;                     // smallest probed n with error <= alpha
    double error_at_n = 0.0;
    double error_below = 0.0;       // error at n - 1 (+inf when n == 1)
    long probes = 0;
};

/// Smallest n with error_at(n) <= alpha, by doubling then bisection.
/// Assumes error_at is nonincreasing in n. Gives up (bounded = false) past `cap`.
SampleComplexity sample_complexity_search(const std::function<double(long)>& error_at, double alpha,
                                          long cap = 100'000'000);

/// Search driven by measure_error on a body.
SampleComplexity sample_complexity_search(const ConvexBody& body, const MeanPointAlgorithm& algorithm,
                                          double alpha, long trials, Adversary adversary,
                                          std::uint64_t seed, long cap = 100'000'000);

}  // namespace dpgeom
