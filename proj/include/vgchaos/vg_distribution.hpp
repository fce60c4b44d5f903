#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

namespace vgc {

/// Parameters of a Variance-Gamma law. The centered family fixes mu = -r*theta.
struct VgParams {
  double r;
  double theta;
  double sigma;
  double mu;

  VgParams(double r_, double theta_, double sigma_);             // centered
  VgParams(double r_, double theta_, double sigma_, double mu_); // general

  bool centered() const;
  void require_centered(const char* what) const;

  double nu() const { return 0.5 * (r - 1.0); }
  double alpha() const;  // sqrt(theta^2 + sigma^2) / sigma^2
  double beta() const { return theta / (sigma * sigma); }

  double mean() const { return mu + r * theta; }
  double variance() const { return r * (sigma * sigma + 2.0 * theta * theta); }
};

/// Spectrum-side parametrization of a VG law inside the second chaos:
/// r copies of eigenvalue +alpha and r copies of -beta.
struct ChaosVgParams {
  double alpha;
  double beta;
  int r;

  ChaosVgParams(double alpha_, double beta_, int r_);
};

/// Density p_VG(x; r, theta, sigma, mu). Returns +infinity at x = mu when
/// the density diverges there (r <= 1).
double density(const VgParams& p, double x);

/// Exact cumulants (kappa_2, ..., kappa_6) of the centered family.
std::array<double, 5> cumulants_2_to_6(const VgParams& p);

/// kappa_p of the centered VG law for 2 <= p <= 12 (via the chaos-free
/// recursion on the log characteristic function).
double vg_cumulant(const VgParams& p, int order);

/// i.i.d. draws via theta(G - r) + sigma sqrt(G) N with G ~ Gamma(r/2, 1/2).
std::vector<double> sample(const VgParams& p, std::size_t n, std::uint64_t seed);

/// 1 / phi_Y(t)^2 = e^{2 i t theta r} (1 - 2 i theta t + sigma^2 t^2)^r.
std::complex<double> char_fn_inv_sq(const VgParams& p, double t);

/// phi_Y(t) = e^{-i t theta r} (1 - 2 i theta t + sigma^2 t^2)^{-r/2}
/// (principal branch; continuous since the base has positive real part).
std::complex<double> char_fn(const VgParams& p, double t);

/// Chaos parameters -> centered VG parameters (theta = alpha - beta,
/// sigma = 2 sqrt(alpha beta)).
VgParams from_chaos_params(const ChaosVgParams& c);

/// The five-term cumulant combination equal to
/// Var(Gamma_{l+1} - 2 theta Gamma_l - sigma^2 Gamma_{l-1})(Y) when Y carries
/// the VG law itself; identically zero for every l >= 1 (evaluated directly
/// from vg_cumulant, so it works for non-integer r too).
double gamma_lin_variance_vg(const VgParams& p, int ell);

/// Window [lo, hi] capturing all but ~eps of the probability mass.
std::pair<double, double> mass_window(const VgParams& p, double eps = 1e-12);

/// E[h(Y)] by deterministic quadrature against the density.
double expect(const VgParams& p, const std::function<double(double)>& h);

}  // namespace vgc
