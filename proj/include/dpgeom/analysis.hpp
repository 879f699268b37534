#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dpgeom/geometry.hpp"
#include "dpgeom/mechanisms.hpp"
#include "dpgeom/workload.hpp"

namespace dpgeom {

enum class Problem { mean_point, query_release };

std::string to_string(Problem problem);

/**
 * Sample-complexity bound formulas evaluated at one parameter point.
 *
 * All absolute constants are 1 and every log is ln(2m), so each value is
 * meaningful only up to constants. For the mean point problem over K in B_2^m:
 *   gauss_upper = sigma sqrt(m) / alpha
 *   proj_upper  = sigma l*(K) / alpha^2
 *   meanpt_lower = sigma l*(K) / (ln(2m)^2 alpha),  asserted for
 *                  alpha <= l*(K) / (sqrt(m) ln(2m)^2)
 * For query release, with K the sensitivity polytope and K' = K / sqrt(m):
 *   proj_upper  = sigma l*(K) / (sqrt(m) alpha^2)
 *   qr_lower    = sigma l*(K)^2 / (m^{3/2} ln(2m)^4 alpha),  asserted for
 *                  alpha <= l*(K) / (m ln(2m)^2)
 */
struct BoundReport {
    Problem problem = Problem::mean_point;
    Index m = 0;
    double alpha = 0.0;
    double eps = 0.0;
    double delta = 0.0;
    double sigma = 0.0;
    WidthEstimate ell_star;
    double gauss_upper = 0.0;
    double proj_upper = 0.0;
    double meanpt_lower = 0.0;
    double qr_lower = 0.0;
    double alpha_validity_threshold = 0.0;
    bool lower_bound_asserted = false;
    double regime_ratio = 0.0;
    bool gaussian_optimal = false;
};

constexpr double kGaussianRegimeThreshold = 0.5;

BoundReport bound_report(const ConvexBody& body, double eps, double delta, double alpha,
                         long width_samples, std::uint64_t seed);

BoundReport query_release_bounds(const Workload& workload, double eps, double delta, double alpha,
                                 long width_samples, std::uint64_t seed);

/// Sample complexity at alpha_prime < alpha implied by padding:
/// (alpha / alpha_prime) * scz(alpha), constant 1.
double padding_scaler(double scz_at_alpha, double alpha, double alpha_prime);

/// C in err^2 = C sigma l*(K) / n for a measured projection-mechanism error.
double fitted_projection_constant(double rms_error, long n, double sigma, double ell_star);

struct GelfandProbe {
    int k = 0;
    SubspaceBasis subspace;
    double diameter = 0.0;            // max Euclidean norm over K° ∩ E
    double ratio = 0.0;               // sqrt(m - k + 1) / diameter
    Matrix section_vertices;          // vertices of K° ∩ E in basis coordinates (empty for balls)
};

/// Section K° ∩ E computed exactly for one subspace of dimension m - k + 1.
GelfandProbe gelfand_probe_subspace(const ConvexBody& body, int k, const SubspaceBasis& subspace);

/// Best of `subspaces` random subspaces; subspace j comes from the RNG stream
/// derived from (seed, j), so more subspaces never lower the best ratio.
/// The ratio is a lower bound on max_k sqrt(m - k + 1) / c_k(K°).
GelfandProbe gelfand_probe(const ConvexBody& body, int k, int subspaces, std::uint64_t seed);

constexpr Index kGelfandMaxDim = 12;

/// Vertices (columns) of the bounded polytope { z : |<a_i, z>| <= 1 } where
/// a_i are the columns of `normals` (d x N). Double description with
/// facet tolerance `tol`. Throws DomainError when the polytope is unbounded.
Matrix symmetric_polytope_vertices(const Matrix& normals, double tol = 1e-9);

}  // namespace dpgeom
