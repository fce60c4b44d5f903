#pragma once

#include "vgchaos/second_chaos.hpp"
#include "vgchaos/vg_distribution.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace vgc {
namespace rosenblatt {

/// Discretization controls for the generalized Rosenblatt variable
/// F_{gamma1,gamma2}(1). The kernel's domain is truncated to [-T, 1];
/// T = 0 picks the truncation point automatically from the exponents (the
/// required T grows like exp(1/|2*gamma_max + 1|), far beyond any fixed
/// default once an exponent sits near -1/2).
struct RosenblattSpec {
  double gamma1;
  double gamma2;
  double T = 0.0;
  int n_nodes = 800;       // cells in the x-direction over [-T, 1]
  int n_s_nodes = 400;     // cells in the s-direction over [0, 1]
  double mesh_exponent = 3.0;

  RosenblattSpec(double g1, double g2);
  void validate() const;  // throws if (gamma1, gamma2) is outside the triangle
};

/// Theorem targets: case (a) gives VG_c(1,0,1); case (b) the rho-dependent law.
enum class LimitCase { a, b };

struct RhoCase {
  double rho;
  double alpha_rho;
  double beta_rho;

  explicit RhoCase(double rho_);
};

/// Closed form of int_R (s-x)_+^{ga} (t-x)_+^{gb} dx. Returns +infinity at
/// s == t (integrable diagonal singularity).
double reduced_kernel(double ga, double gb, double s, double t);

/// The symmetrized, normalized chaos kernel f(x1, x2) at scale A (A = 1 here;
/// the normalization is applied downstream as a spectrum rescale).
double chaos_kernel(const RosenblattSpec& spec, double x1, double x2);

/// Spectrum of the associated Hilbert-Schmidt operator, computed from a
/// piecewise-constant Galerkin discretization with exact cell integrals,
/// trimmed of entries below 1e-10 * max|c| and rescaled so kappa_2 = 1.
SecondChaosElement spectrum(const RosenblattSpec& spec);

/// kappa_2 with A = 1 in closed form (two-fold cyclic trace); the anchor for
/// the normalizing constant used by the MC trace estimator.
double kappa2_closed_form(const RosenblattSpec& spec);

/// Normalized kappa_p from a three-level mesh sequence (quarter, half, full
/// resolution of `spec`) with Aitken extrapolation. The plain Galerkin
/// cumulants carry an eigenvalue-tail truncation bias of empirical order
/// ~n^{-(1+2(1+gamma1+gamma2))}; the accelerated sequence removes its leading
/// term.
double spectrum_cumulant_extrapolated(const RosenblattSpec& spec, int p);

struct McEstimate {
  double value;
  double se;
};

/// Quasi-Monte-Carlo estimate of kappa_p (after the kappa_2 = 1
/// normalization) from the p-fold cyclic-trace integral; independent of the
/// Galerkin spectrum.
McEstimate cumulant_trace_mc(const RosenblattSpec& spec, int p, std::size_t n_mc,
                             std::uint64_t seed);

/// The limiting VG law. Case b needs rho in (0,1).
VgParams target_vg(LimitCase c, double rho = 0.5);

/// gamma2 from gamma1 under the case-b exponent link gamma2 = (gamma1 + 1/2)/rho - 1/2.
double case_b_gamma2(double gamma1, double rho);

struct SweepRow {
  double gamma1;
  double gamma2;
  double eps;  // -gamma1 - 1/2
  double M;
  std::array<double, 4> kappa_diff;  // |kappa_l(F) - kappa_l(Y)|, l = 3..6
  double six_moment_bound;
  double w1_hat;
  double w1_se;
  double dict_lower;
};

struct RateExperimentResult {
  std::vector<SweepRow> rows;
  double slope_M;
  std::array<double, 4> slope_kappa;  // l = 3..6
  double slope_six_moment;

  std::string to_csv() const;
  std::string summary_json() const;
};

/// Runs the sweep gamma1 -> -1/2 and fits log-log slopes against
/// eps = -gamma1 - 1/2. Template spec supplies the discretization controls.
/// Case a walks the diagonal gamma2 = gamma1; case b follows the rho link.
RateExperimentResult rate_experiment(LimitCase c, double rho,
                                     const std::vector<double>& gamma1_sweep,
                                     const RosenblattSpec& tmpl, std::size_t n_mc,
                                     std::uint64_t seed);

/// Case-a sweep with gamma2 held fixed in (-1, -1/2) while gamma1 -> -1/2;
/// this is the regime whose limit is the product law VG_c(1, 0, 1).
RateExperimentResult rate_experiment_fixed_gamma2(const std::vector<double>& gamma1_sweep,
                                                  double gamma2, const RosenblattSpec& tmpl,
                                                  std::size_t n_mc, std::uint64_t seed);

}  // namespace rosenblatt
}  // namespace vgc
