#pragma once

#include "vgchaos/second_chaos.hpp"
#include "vgchaos/stein.hpp"
#include "vgchaos/vg_distribution.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace vgc {

/// All bound quantities for a (F, Y) pair.
struct BoundReport {
  double M = 0.0;
  double M_prime = 0.0;
  double six_moment_bound = 0.0;  // full combination
  double clean_bound = 0.0;       // C sqrt(M)
  double w1_hat = 0.0;
  double w1_se = 0.0;
  double dh2_dictionary_lower = 0.0;
  double dh2_dictionary_lower_cf = 0.0;
  MsConstants constants{};
  std::array<std::array<double, 2>, 5> cumulant_table{};  // {kappa_l(F), kappa_l(Y)}, l=2..6

  std::string to_json() const;
};

/// The cumulant upper bound for d_H1(F, Y); requires kappa_2 matched to 1e-9
/// relative.
double six_moment_bound(const SecondChaosElement& F, const VgParams& p);

/// The simplified C sqrt(M) form with
/// C = C1 max{1/2, 2 sqrt(|theta|/4!), sqrt(|4 theta^2 - 2 sigma^2|/3!), sigma sqrt(2|theta|)}.
double clean_bound(const SecondChaosElement& F, const VgParams& p);

/// Order-statistics estimate of W1 between the laws behind two equal-length
/// samples.
double empirical_w1(std::vector<double> xs, std::vector<double> ys);

/// Lower estimate of d_H2: max over the certified dictionary of
/// |mean h(xs) - E h(Y)| (the expectation by quadrature).
double dh2_dictionary_lower(const std::vector<double>& xs, const VgParams& p,
                            const std::vector<TestFunction>& dict = h2_dictionary());

/// The same dictionary lower estimate evaluated in the Fourier domain: both
/// E h(F) and E h(Y) come from the closed-form characteristic functions, so
/// the value carries no sampling floor (needed to resolve distances far below
/// the Monte Carlo resolution of the sample-based estimate).
double dh2_dictionary_lower_cf(const SecondChaosElement& F, const VgParams& p);

struct RateFit {
  double slope;
  double intercept;
  double r2;
};

/// OLS on (log x, log y); all coordinates must be positive.
RateFit rate_fit(const std::vector<std::pair<double, double>>& points);

/// Assembles the full report. W1 is estimated from `n_batches` batches of
/// n_mc samples each from F against matched samples from Y.
BoundReport bound_report(const SecondChaosElement& F, const VgParams& p, std::size_t n_mc,
                         std::uint64_t seed, int n_batches = 20);

/// One-parameter interpolating family toward the spectrum of Y:
/// F_t = (1-t) c_Y + t c_pert, rescaled so kappa_2 = kappa_2(Y). M(F_t) = Theta(t).
SecondChaosElement interpolating_family(const std::vector<double>& c_target,
                                        const std::vector<double>& c_pert, double t,
                                        double kappa2_target);

/// One row of the rate experiment along the interpolating family.
struct RateRow {
  double t;
  double M;
  double w1_hat;
  double w1_se;
  double dict_lower;
  double dict_lower_cf;
  double six_moment;
};

std::vector<RateRow> interpolation_rate_experiment(const std::vector<double>& c_target,
                                                   const std::vector<double>& c_pert,
                                                   const VgParams& p, int k_max, std::size_t n_mc,
                                                   std::uint64_t seed);

std::string rate_rows_to_csv(const std::vector<RateRow>& rows);

}  // namespace vgc
