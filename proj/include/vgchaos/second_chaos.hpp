#pragma once

#include "vgchaos/vg_distribution.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace vgc {

/// An element F = sum_i c_i (N_i^2 - 1) of the second Wiener chaos,
/// represented by the (finite) eigenvalue sequence of its Hilbert-Schmidt
/// operator. Immutable after construction.
class SecondChaosElement {
 public:
  explicit SecondChaosElement(std::vector<double> eigenvalues);

  const std::vector<double>& eigenvalues() const { return c_; }
  std::size_t size() const { return c_.size(); }

  /// sum_i c_i^p
  double power_sum(int p) const;

  /// kappa_p(F) = 2^{p-1}(p-1)! sum_i c_i^p, for 2 <= p <= 12.
  double cumulant(int p) const;

  /// i.i.d. draws of sum c_i (N_i^2 - 1); deterministic given seed and
  /// independent of any parallel evaluation order.
  std::vector<double> sample(std::size_t n, std::uint64_t seed) const;

  /// Copy rescaled so that kappa_2 = target (target > 0).
  SecondChaosElement rescaled_to_kappa2(double target) const;

  std::string to_json() const;
  static SecondChaosElement from_json(const std::string& text);

 private:
  std::vector<double> c_;
};

/// phi_F(t) = prod_i (1 - 2 i c_i t)^{-1/2} e^{-i c_i t} (principal branch).
std::complex<double> char_fn(const SecondChaosElement& F, double t);

/// E[Gamma_{l+2, l+1, l}(F)] = kappa_{l+3}/(l+2)! - 2 theta kappa_{l+2}/(l+1)!
///                             - sigma^2 kappa_{l+1}/l!   (kappa_1 = 0)
double gamma_mixed_mean(const SecondChaosElement& F, int ell, double theta, double sigma);

/// Var(Gamma_{l+1} - 2 theta Gamma_l - sigma^2 Gamma_{l-1})(F), l >= 1,
/// via the five-term cumulant combination. Always >= 0.
double gamma_lin_variance(const SecondChaosElement& F, int ell, double theta, double sigma);

/// Same variance from the per-eigenvalue spectral coefficients
/// d_i = 2^{l+1} c_i^{l+2} - 2^{l+1} theta c_i^{l+1} - 2^{l-1} sigma^2 c_i^l;
/// an independent route used for consistency checks.
double gamma_lin_variance_spectral(const SecondChaosElement& F, int ell, double theta, double sigma);

struct MStatistic {
  double M;
  double M_prime;
  int argmax_ell;  // smallest order attaining M (within 1e-12 relative)
};

/// M(F) = max over ell in {2..6} of |kappa_ell(F) - kappa_ell(Y)|;
/// M' excludes ell = 5.
MStatistic m_statistic(const SecondChaosElement& F, const VgParams& Y);

/// Sample cumulants khat_2..khat_6 from centered sample moments.
std::array<double, 5> sample_cumulants_2_to_6(const std::vector<double>& xs);

/// Batched estimate: mean and standard error of each cumulant over `n_batches`
/// equal slices of the sample.
struct BatchedCumulants {
  std::array<double, 5> mean;
  std::array<double, 5> se;
};
BatchedCumulants batched_cumulants(const std::vector<double>& xs, int n_batches = 20);

}  // namespace vgc
