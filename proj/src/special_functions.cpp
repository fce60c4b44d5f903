#include "vgchaos/special_functions.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <limits>

namespace vgc {

namespace {

// Unscaled values stay representable up to roughly e^{+-700}; past that we
// switch to direct quadrature of the classical integral representations.
constexpr double kLargeArg = 690.0;

double check_order(double nu) {
  if (nu < 0.0 || std::isnan(nu))
    throw std::domain_error("bessel: order nu must be >= 0");
  return nu;
}

// e^x K_nu(x) = int_0^inf exp(-x(cosh t - 1)) cosh(nu t) dt
double k_scaled_quadrature(double nu, double x) {
  boost::math::quadrature::tanh_sinh<double> integrator;
  auto f = [&](double t) {
    double e = x * std::expm1(std::log(std::cosh(t)));  // x(cosh t - 1), stable for small t
    if (e > 745.0) return 0.0;
    // cosh(nu t) can overflow on the (exponentially damped) tail; combine exponents.
    double a = nu * t - e;
    double b = -nu * t - e;
    return 0.5 * (std::exp(a) + std::exp(b));
  };
  return integrator.integrate(f, 0.0, 40.0 / std::sqrt(x) + 2.0);
}

// e^{-x} I_nu(x) = (1/pi) int_0^pi exp(-x(1-cos u)) cos(nu u) du  - sin(nu pi)/pi * tail,
// with tail = int_0^inf exp(-x(1+cosh t) - nu t) dt <= e^{-2x}, negligible for large x.
double i_scaled_quadrature(double nu, double x) {
  boost::math::quadrature::tanh_sinh<double> integrator;
  auto f = [&](double u) {
    double e = 2.0 * x * std::pow(std::sin(0.5 * u), 2);  // x(1-cos u)
    if (e > 745.0) return 0.0;
    return std::exp(-e) * std::cos(nu * u);
  };
  constexpr double pi = 3.14159265358979323846;
  return integrator.integrate(f, 0.0, pi) / pi;
}

}  // namespace

double gamma_fn(double x) {
  if (!(x > 0.0)) throw std::domain_error("gamma_fn: requires x > 0");
  return boost::math::tgamma(x);
}

double log_gamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("log_gamma: requires x > 0");
  return boost::math::lgamma(x);
}

double beta_fn(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::domain_error("beta_fn: requires a, b > 0");
  return std::exp(log_gamma(a) + log_gamma(b) - log_gamma(a + b));
}

double bessel_k(double nu, double x) {
  nu = std::abs(nu);  // K is even in the order
  if (std::isnan(nu)) throw std::domain_error("bessel_k: order must not be NaN");
  if (!(x > 0.0)) throw std::domain_error("bessel_k: requires x > 0");
  if (x > kLargeArg) return std::exp(-x) * k_scaled_quadrature(nu, x);
  return boost::math::cyl_bessel_k(nu, x);
}

double bessel_i(double nu, double x) {
  check_order(nu);
  if (x < 0.0 || std::isnan(x)) throw std::domain_error("bessel_i: requires x >= 0");
  if (x > kLargeArg) {
    double s = i_scaled_quadrature(nu, x);
    return (x < 709.0) ? s * std::exp(x) : std::numeric_limits<double>::infinity();
  }
  return boost::math::cyl_bessel_i(nu, x);
}

double bessel_k_scaled(double nu, double x) {
  nu = std::abs(nu);  // K is even in the order
  if (std::isnan(nu)) throw std::domain_error("bessel_k_scaled: order must not be NaN");
  if (!(x > 0.0)) throw std::domain_error("bessel_k_scaled: requires x > 0");
  if (x > kLargeArg) return k_scaled_quadrature(nu, x);
  return std::exp(x + std::log(boost::math::cyl_bessel_k(nu, x)));
}

double bessel_i_scaled(double nu, double x) {
  check_order(nu);
  if (x < 0.0 || std::isnan(x)) throw std::domain_error("bessel_i_scaled: requires x >= 0");
  if (x == 0.0) return (nu == 0.0) ? 1.0 : 0.0;
  if (x > kLargeArg) return i_scaled_quadrature(nu, x);
  return std::exp(-x) * boost::math::cyl_bessel_i(nu, x);
}

}  // namespace vgc
