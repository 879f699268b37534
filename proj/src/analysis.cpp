#include "dpgeom/analysis.hpp"

#include <cmath>

#include "dpgeom/errors.hpp"

namespace dpgeom {

namespace {

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("bounds: alpha must lie in (0, 1)");
}

double log2m(Index m) { return std::log(2.0 * static_cast<double>(m)); }

}  // namespace

std::string to_string(Problem problem) {
    return problem == Problem::mean_point ? "mean_point" : "query_release";
}

BoundReport bound_report(const ConvexBody& body, double eps, double delta, double alpha,
                         long width_samples, std::uint64_t seed) {
    check_alpha(alpha);
    if (body.diameter() > 1.0 + 1e-9)
        throw DomainError("bound_report: body is not contained in the unit ball");
    const auto params = PrivacyParams::make(eps, delta);

    BoundReport r;
    r.problem = Problem::mean_point;
    r.m = body.dim();
    r.alpha = alpha;
    r.eps = eps;
    r.delta = delta;
    r.sigma = params.sigma;
    r.ell_star = gaussian_width(body, width_samples, seed);

    const double m = static_cast<double>(r.m);
    const double ell = r.ell_star.value;
    const double L = log2m(r.m);
    r.gauss_upper = r.sigma * std::sqrt(m) / alpha;
    r.proj_upper = r.sigma * ell / (alpha * alpha);
    r.meanpt_lower = r.sigma * ell / (L * L * alpha);
    // Query release lower bound for a workload whose scaled sensitivity
    // polytope is this body: l*(K) = sqrt(m) l*(K').
    r.qr_lower = r.sigma * ell * ell / (std::sqrt(m) * std::pow(L, 4) * alpha);
    r.alpha_validity_threshold = ell / (std::sqrt(m) * L * L);
    r.lower_bound_asserted = alpha <= r.alpha_validity_threshold;
    r.regime_ratio = ell / std::sqrt(m);
    r.gaussian_optimal = r.regime_ratio >= kGaussianRegimeThreshold;
    return r;
}

BoundReport query_release_bounds(const Workload& workload, double eps, double delta, double alpha,
                                 long width_samples, std::uint64_t seed) {
    check_alpha(alpha);
    const auto params = PrivacyParams::make(eps, delta);
    const ConvexBody K = sensitivity_polytope(workload, false);

    BoundReport r;
    r.problem = Problem::query_release;
    r.m = workload.queries();
    r.alpha = alpha;
    r.eps = eps;
    r.delta = delta;
    r.sigma = params.sigma;
    r.ell_star = gaussian_width(K, width_samples, seed);

    const double m = static_cast<double>(r.m);
    const double ell = r.ell_star.value;
    const double L = log2m(r.m);
    r.gauss_upper = r.sigma * std::sqrt(m) / alpha;
    r.proj_upper = r.sigma * ell / (std::sqrt(m) * alpha * alpha);
    r.meanpt_lower = r.sigma * (ell / std::sqrt(m)) / (L * L * alpha);
    r.qr_lower = r.sigma * ell * ell / (std::pow(m, 1.5) * std::pow(L, 4) * alpha);
    r.alpha_validity_threshold = ell / (m * L * L);
    r.lower_bound_asserted = alpha <= r.alpha_validity_threshold;
    r.regime_ratio = ell / m;
    r.gaussian_optimal = r.regime_ratio >= kGaussianRegimeThreshold;
    return r;
}

double padding_scaler(double scz_at_alpha, double alpha, double alpha_prime) {
    if (!(alpha_prime > 0.0 && alpha_prime < alpha && alpha < 1.0))
        throw DomainError("padding_scaler: need 0 < alpha' < alpha < 1");
    if (!(scz_at_alpha >= 0.0)) throw DomainError("padding_scaler: sample complexity must be >= 0");
    return (alpha / alpha_prime) * scz_at_alpha;
}

double fitted_projection_constant(double rms_error, long n, double sigma, double ell_star) {
    if (n < 1 || !(sigma > 0.0) || !(ell_star > 0.0))
        throw DomainError("fitted_projection_constant: need n >= 1, sigma > 0, l* > 0");
    return rms_error * rms_error * static_cast<double>(n) / (sigma * ell_star);
}

}  // namespace dpgeom
