#pragma once

// Closed-form and quadrature reference values, computed without touching the
// library so that they can serve as independent checks.

#include <cmath>
#include <limits>

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace oracle {

inline double sigma(double eps, double delta) {
    const long double e = eps;
    const long double d = delta;
    return static_cast<double>((0.5L * std::sqrt(e) + std::sqrt(-2.0L * std::log(d))) / e);
}

// E ||g||_2 for g ~ N(0, I_m): sqrt(2) Gamma((m+1)/2) / Gamma(m/2).
inline double expected_l2_gamma(int m) {
    return std::sqrt(2.0) * boost::math::tgamma_ratio((m + 1) / 2.0, m / 2.0);
}

// Same quantity by integrating r against the chi density.
inline double expected_l2_quadrature(int m) {
    const double k = m;
    const double log_norm = (1.0 - k / 2.0) * std::log(2.0) - std::lgamma(k / 2.0);
    auto f = [&](double r) { return r <= 0.0 ? 0.0 : std::exp(log_norm + k * std::log(r) - r * r / 2.0); };
    boost::math::quadrature::exp_sinh<double> integrator;
    return integrator.integrate(f);
}

// E |g| for a standard normal, by quadrature of 2 t phi(t).
inline double expected_abs_normal() {
    const double c = 1.0 / std::sqrt(2.0 * boost::math::constants::pi<double>());
    auto f = [c](double t) { return 2.0 * t * c * std::exp(-t * t / 2.0); };
    boost::math::quadrature::exp_sinh<double> integrator;
    return integrator.integrate(f);
}

// E ||g||_1 / sqrt(m), the mean width of Q^m.
inline double cube_width(int m) { return expected_abs_normal() * m / std::sqrt(static_cast<double>(m)); }

// E max_i |g_i| = int_0^inf (1 - P(|g| <= t)^m) dt.
inline double expected_max_abs(int m) {
    auto f = [m](double t) { return 1.0 - std::pow(boost::math::erf(t / std::sqrt(2.0)), m); };
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, 40.0, 15, 1e-14);
}

}  // namespace oracle
