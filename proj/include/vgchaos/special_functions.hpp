#pragma once

#include <stdexcept>

namespace vgc {

/// Tolerances shared by the special-function evaluations.
struct SpecialFnConfig {
  double rel_tol = 1e-12;
  int max_terms = 200;

  void validate() const {
    if (!(rel_tol > 0.0 && rel_tol <= 1e-6))
      throw std::invalid_argument("SpecialFnConfig: rel_tol must be in (0, 1e-6]");
    if (max_terms < 50)
      throw std::invalid_argument("SpecialFnConfig: max_terms must be >= 50");
  }
};

/// Gamma function, x > 0.
double gamma_fn(double x);

/// log Gamma(x), x > 0.
double log_gamma(double x);

/// Beta function B(a, b) = Gamma(a)Gamma(b)/Gamma(a+b), computed in log space.
double beta_fn(double a, double b);

/// Modified Bessel function of the second kind K_nu(x), nu >= 0, x > 0.
double bessel_k(double nu, double x);

/// Modified Bessel function of the first kind I_nu(x), nu >= 0, x >= 0.
double bessel_i(double nu, double x);

/// Exponentially scaled variants: e^x K_nu(x) and e^{-x} I_nu(x).
/// Stable for large x where the unscaled values under/overflow.
double bessel_k_scaled(double nu, double x);
double bessel_i_scaled(double nu, double x);

}  // namespace vgc
