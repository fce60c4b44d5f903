#include "vgchaos/rosenblatt.hpp"

#include <doctest.h>

#include <cmath>

using namespace vgc;
using namespace vgc::rosenblatt;

TEST_CASE("exponent triangle validation") {
  CHECK_NOTHROW(RosenblattSpec(-0.6, -0.6).validate());
  CHECK_NOTHROW(RosenblattSpec(-0.51, -0.95).validate());
  CHECK_THROWS_AS(RosenblattSpec(-0.4, -0.6).validate(), std::invalid_argument);   // gamma1 >= -1/2
  CHECK_THROWS_AS(RosenblattSpec(-0.6, -1.1).validate(), std::invalid_argument);   // gamma2 <= -1
  CHECK_THROWS_AS(RosenblattSpec(-0.8, -0.8).validate(), std::invalid_argument);   // sum <= -3/2
  RosenblattSpec bad(-0.6, -0.6);
  bad.n_nodes = 4;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("reduced kernel closed form") {
  // int (1-x)_+^{-0.6} (0-x)_+^{-0.6} dx over x < 0 equals B(0.4, 0.2)
  CHECK(reduced_kernel(-0.6, -0.6, 1.0, 0.0) == doctest::Approx(6.8380854129399175).epsilon(1e-12));
  CHECK(std::isinf(reduced_kernel(-0.6, -0.7, 0.3, 0.3)));
}

TEST_CASE("reduced kernel symmetry and homogeneity") {
  double ga = -0.55, gb = -0.8;
  for (auto [s, t] : {std::pair{0.9, 0.2}, {0.4, 0.7}}) {
    CHECK(reduced_kernel(ga, gb, s, t) == doctest::Approx(reduced_kernel(gb, ga, t, s)).epsilon(1e-12));
    double lam = 2.5;
    CHECK(reduced_kernel(ga, gb, lam * s, lam * t) ==
          doctest::Approx(std::pow(lam, 1.0 + ga + gb) * reduced_kernel(ga, gb, s, t)).epsilon(1e-12));
  }
}

TEST_CASE("chaos kernel diagonal closed form for negative arguments") {
  RosenblattSpec spec(-0.55, -0.7);
  double q = spec.gamma1 + spec.gamma2;
  for (double x : {-0.3, -1.2, -4.0}) {
    double exact = (std::pow(1.0 - x, q + 1.0) - std::pow(-x, q + 1.0)) / (q + 1.0);
    CHECK(chaos_kernel(spec, x, x) == doctest::Approx(exact).epsilon(1e-10));
  }
  // symmetry of the symmetrized kernel
  CHECK(chaos_kernel(spec, -0.2, -0.8) == doctest::Approx(chaos_kernel(spec, -0.8, -0.2)).epsilon(1e-12));
}

TEST_CASE("rho parametrization of the limiting law") {
  RhoCase rc(0.5);
  // independently computed with 30-digit arithmetic
  CHECK(rc.alpha_rho == doctest::Approx(0.99956700550019246).epsilon(1e-12));
  CHECK(rc.beta_rho == doctest::Approx(0.029424505354860565).epsilon(1e-12));
  CHECK(rc.alpha_rho * rc.alpha_rho + rc.beta_rho * rc.beta_rho == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(RhoCase(0.0), std::invalid_argument);
  CHECK_THROWS_AS(RhoCase(1.5), std::invalid_argument);
}

TEST_CASE("limit targets") {
  VgParams a = target_vg(LimitCase::a);
  CHECK(a.r == 1.0);
  CHECK(a.theta == 0.0);
  CHECK(a.sigma == 1.0);
  VgParams b = target_vg(LimitCase::b, 0.5);
  CHECK(b.theta == doctest::Approx(0.68599434057003535).epsilon(1e-12));
  CHECK(b.sigma == doctest::Approx(0.24253562503633297).epsilon(1e-12));
  CHECK(b.variance() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(vg_cumulant(b, 3) == doctest::Approx(2.8246825788177926).epsilon(1e-12));
  CHECK(vg_cumulant(b, 4) == doctest::Approx(11.979238754325260).epsilon(1e-12));
}

TEST_CASE("case-b exponent link") {
  CHECK(case_b_gamma2(-0.55, 0.5) == doctest::Approx(-0.6).epsilon(1e-13));
  CHECK(case_b_gamma2(-0.51, 0.25) == doctest::Approx(-0.54).epsilon(1e-13));
  CHECK_THROWS_AS(case_b_gamma2(-0.55, 1.2), std::invalid_argument);
}

TEST_CASE("spectrum is normalized and PSD on the diagonal") {
  RosenblattSpec spec(-0.6, -0.6);
  spec.n_nodes = 256;
  spec.n_s_nodes = 128;
  auto F = spectrum(spec);
  CHECK(F.cumulant(2) == doctest::Approx(1.0).epsilon(1e-12));
  // diagonal kernel is a Gram kernel: eigenvalues are (numerically) nonnegative
  double min_c = 0.0;
  for (double c : F.eigenvalues()) min_c = std::min(min_c, c);
  CHECK(min_c > -1e-8);
}

TEST_CASE("off-diagonal spectrum has genuinely negative eigenvalues") {
  RosenblattSpec spec(-0.55, -0.85);
  spec.n_nodes = 256;
  spec.n_s_nodes = 128;
  auto F = spectrum(spec);
  double min_c = 0.0, max_c = 0.0;
  for (double c : F.eigenvalues()) {
    min_c = std::min(min_c, c);
    max_c = std::max(max_c, c);
  }
  CHECK(min_c < -0.01);
  CHECK(max_c > 0.1);
}

TEST_CASE("trace estimator normalizes kappa_2 to one") {
  RosenblattSpec spec(-0.6, -0.65);
  auto est = cumulant_trace_mc(spec, 2, 40000, 21);
  CHECK(est.value == doctest::Approx(1.0).epsilon(0.01));
  CHECK(std::abs(est.value - 1.0) < 5.0 * est.se + 5e-3);
}

TEST_CASE("trace estimator is deterministic in the seed") {
  RosenblattSpec spec(-0.6, -0.65);
  auto a = cumulant_trace_mc(spec, 3, 20000, 5);
  auto b = cumulant_trace_mc(spec, 3, 20000, 5);
  auto c = cumulant_trace_mc(spec, 3, 20000, 6);
  CHECK(a.value == b.value);
  CHECK(a.se == b.se);
  CHECK(a.value != c.value);
}

TEST_CASE("cross-oracle cumulant agreement at a moderate point") {
  RosenblattSpec spec(-0.6, -0.65);
  spec.n_nodes = 1024;
  spec.n_s_nodes = 512;
  for (int p = 3; p <= 4; ++p) {
    double spectral = spectrum_cumulant_extrapolated(spec, p);
    auto mc = cumulant_trace_mc(spec, p, 200000, 77);
    double rel = std::abs(spectral - mc.value) / std::abs(mc.value);
    CHECK(rel < std::max(0.01, 4.0 * mc.se / std::abs(mc.value)));
  }
}

TEST_CASE("rate experiment produces a full table") {
  RosenblattSpec tmpl(-0.6, -0.6);
  tmpl.n_nodes = 128;
  tmpl.n_s_nodes = 64;
  auto res = rate_experiment(LimitCase::b, 0.5, {-0.54, -0.57, -0.6, -0.64}, tmpl, 2000, 13);
  CHECK(res.rows.size() == 4);
  for (const auto& row : res.rows) {
    CHECK(row.eps == doctest::Approx(-row.gamma1 - 0.5).epsilon(1e-13));
    CHECK(row.gamma2 == doctest::Approx(case_b_gamma2(row.gamma1, 0.5)).epsilon(1e-13));
    CHECK(row.M > 0.0);
    CHECK(row.w1_se > 0.0);
  }
  CHECK(std::isfinite(res.slope_M));
  auto csv = res.to_csv();
  CHECK(csv.find("gamma1,gamma2,eps,M") == 0);
  auto js = res.summary_json();
  CHECK(js.find("slope_M") != std::string::npos);
}

TEST_CASE("fixed-gamma2 sweep holds the second exponent constant") {
  RosenblattSpec tmpl(-0.6, -0.6);
  tmpl.n_nodes = 128;
  tmpl.n_s_nodes = 64;
  auto res = rate_experiment_fixed_gamma2({-0.52, -0.55, -0.58, -0.62}, -0.7, tmpl, 2000, 13);
  CHECK(res.rows.size() == 4);
  for (const auto& row : res.rows) CHECK(row.gamma2 == -0.7);
}
