#include "vgchaos/special_functions.hpp"

#include <doctest.h>

#include <cmath>

using namespace vgc;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("gamma function reference values") {
  CHECK(gamma_fn(1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(gamma_fn(5.0) == doctest::Approx(24.0).epsilon(1e-14));
  CHECK(gamma_fn(0.5) == doctest::Approx(1.7724538509055160).epsilon(1e-14));
  CHECK(log_gamma(10.0) == doctest::Approx(std::log(362880.0)).epsilon(1e-14));
  CHECK_THROWS_AS(gamma_fn(0.0), std::domain_error);
  CHECK_THROWS_AS(gamma_fn(-1.5), std::domain_error);
}

TEST_CASE("beta function reference values and symmetry") {
  // independently computed with 30-digit arithmetic
  CHECK(beta_fn(0.4, 0.2) == doctest::Approx(6.8380854129399175).epsilon(1e-13));
  CHECK(beta_fn(0.3, 0.9) == doctest::Approx(3.4817962504991387).epsilon(1e-13));
  CHECK(beta_fn(2.0, 3.0) == doctest::Approx(1.0 / 12.0).epsilon(1e-13));
  for (double a : {0.1, 0.7, 2.3})
    for (double b : {0.2, 1.9})
      CHECK(beta_fn(a, b) == doctest::Approx(beta_fn(b, a)).epsilon(1e-13));
  CHECK_THROWS_AS(beta_fn(-0.1, 1.0), std::domain_error);
}

TEST_CASE("bessel K and I reference values") {
  CHECK(bessel_k(0.3, 2.5) == doctest::Approx(0.063313879296295560).epsilon(1e-12));
  CHECK(bessel_i(0.7, 1.2) == doctest::Approx(0.94390600059186012).epsilon(1e-12));
  // half-integer closed forms
  for (double x : {0.3, 1.0, 4.0, 20.0}) {
    CHECK(bessel_k(0.5, x) == doctest::Approx(std::sqrt(kPi / (2.0 * x)) * std::exp(-x)).epsilon(1e-12));
    CHECK(bessel_i(0.5, x) == doctest::Approx(std::sqrt(2.0 / (kPi * x)) * std::sinh(x)).epsilon(1e-12));
  }
}

TEST_CASE("K is even in the order") {
  for (double nu : {0.1, 0.45})
    for (double x : {0.5, 3.0})
      CHECK(bessel_k(-nu, x) == doctest::Approx(bessel_k(nu, x)).epsilon(1e-13));
}

TEST_CASE("wronskian identity I_{nu+1} K_nu + I_nu K_{nu+1} = 1/x") {
  for (double nu : {0.0, 0.4, 1.7})
    for (double x : {0.2, 1.0, 8.0}) {
      double w = bessel_i(nu + 1.0, x) * bessel_k(nu, x) + bessel_i(nu, x) * bessel_k(nu + 1.0, x);
      CHECK(w == doctest::Approx(1.0 / x).epsilon(1e-11));
    }
}

TEST_CASE("scaled variants agree with unscaled in the overlap") {
  for (double nu : {0.0, 0.9, 2.5})
    for (double x : {0.5, 10.0, 100.0}) {
      CHECK(bessel_k_scaled(nu, x) == doctest::Approx(std::exp(x) * bessel_k(nu, x)).epsilon(1e-11));
      CHECK(bessel_i_scaled(nu, x) == doctest::Approx(std::exp(-x) * bessel_i(nu, x)).epsilon(1e-11));
    }
}

TEST_CASE("scaled variants stay finite at large argument") {
  // independently computed with 30-digit arithmetic
  CHECK(bessel_k_scaled(2.5, 800.0) == doctest::Approx(0.044477721530595946).epsilon(1e-8));
  CHECK(bessel_i_scaled(1.3, 900.0) == doctest::Approx(0.013287435896299202).epsilon(1e-8));
  CHECK(std::isfinite(bessel_k_scaled(0.5, 5000.0)));
  CHECK(std::isfinite(bessel_i_scaled(0.5, 5000.0)));
  // half-integer closed form survives the quadrature branch
  double x = 1200.0;
  CHECK(bessel_k_scaled(0.5, x) == doctest::Approx(std::sqrt(kPi / (2.0 * x))).epsilon(1e-8));
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(bessel_k(0.5, 0.0), std::domain_error);
  CHECK_THROWS_AS(bessel_k(0.5, -1.0), std::domain_error);
  CHECK_THROWS_AS(bessel_i(-0.5, 1.0), std::domain_error);
  CHECK_THROWS_AS(bessel_i(0.5, -1.0), std::domain_error);
  CHECK(bessel_i_scaled(0.0, 0.0) == 1.0);
  CHECK(bessel_i_scaled(0.7, 0.0) == 0.0);
}

TEST_CASE("config validation") {
  SpecialFnConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.rel_tol = 1e-3;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.rel_tol = 1e-12;
  cfg.max_terms = 10;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
