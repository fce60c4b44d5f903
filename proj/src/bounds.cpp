#include "vgchaos/bounds.hpp"

#include "vgchaos/parallel.hpp"
#include "vgchaos/rng.hpp"

#include <nlohmann/json.hpp>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace vgc {

namespace {

void require_matched_kappa2(const SecondChaosElement& F, const VgParams& p, const char* what) {
  double k2f = F.cumulant(2);
  double k2y = p.variance();
  if (std::abs(k2f - k2y) > 1e-9 * std::max(std::abs(k2y), 1.0))
    throw std::invalid_argument(std::string(what) +
                                ": kappa_2(F) must match kappa_2(Y); rescale the spectrum first");
}

std::array<double, 4> bound_coefficients(const VgParams& p) {
  const double th = std::abs(p.theta);
  const double s2 = p.sigma * p.sigma;
  return {1.0 / std::sqrt(120.0),                                    // kappa_6 term
          2.0 * std::sqrt(th / 24.0),                                // kappa_5 term
          std::sqrt(std::abs(4.0 * p.theta * p.theta - 2.0 * s2) / 6.0),  // kappa_4 term
          p.sigma * std::sqrt(2.0 * th)};                            // kappa_3 sqrt term
}

}  // namespace

double six_moment_bound(const SecondChaosElement& F, const VgParams& p) {
  p.require_centered("six_moment_bound");
  require_matched_kappa2(F, p, "six_moment_bound");
  auto ky = cumulants_2_to_6(p);
  auto coef = bound_coefficients(p);
  const double C1 = ms_constants(p).C1;
  double d3 = std::abs(F.cumulant(3) - ky[1]);
  double d4 = std::abs(F.cumulant(4) - ky[2]);
  double d5 = std::abs(F.cumulant(5) - ky[3]);
  double d6 = std::abs(F.cumulant(6) - ky[4]);
  return C1 * (coef[0] * std::sqrt(d6) + coef[1] * std::sqrt(d5) + coef[2] * std::sqrt(d4) +
               coef[3] * std::sqrt(d3)) +
         0.5 * C1 * d3;
}

double clean_bound(const SecondChaosElement& F, const VgParams& p) {
  p.require_centered("clean_bound");
  require_matched_kappa2(F, p, "clean_bound");
  auto coef = bound_coefficients(p);
  const double C1 = ms_constants(p).C1;
  double cmax = std::max({0.5, coef[1], coef[2], coef[3]});
  return C1 * cmax * std::sqrt(m_statistic(F, p).M);
}

double empirical_w1(std::vector<double> xs, std::vector<double> ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("empirical_w1: length mismatch");
  if (xs.size() < 2) throw std::invalid_argument("empirical_w1: need n >= 2");
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  double s = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) s += std::abs(xs[i] - ys[i]);
  return s / xs.size();
}

double dh2_dictionary_lower(const std::vector<double>& xs, const VgParams& p,
                            const std::vector<TestFunction>& dict) {
  p.require_centered("dh2_dictionary_lower");
  double best = 0.0;
  for (const auto& tf : dict) {
    double mean = 0.0;
    for (double x : xs) mean += tf.fn(x);
    mean /= xs.size();
    best = std::max(best, std::abs(mean - expect(p, tf.fn)));
  }
  return best;
}

double dh2_dictionary_lower_cf(const SecondChaosElement& F, const VgParams& p) {
  p.require_centered("dh2_dictionary_lower_cf");
  using boost::math::quadrature::gauss_kronrod;
  const double pi = std::numbers::pi;
  auto phi_f = [&](double s) { return char_fn(F, s); };
  auto phi_y = [&](double s) { return char_fn(p, s); };
  double best = 0.0;
  auto take = [&](double ef, double ey) { best = std::max(best, std::abs(ef - ey)); };
  // the shapes and scalings mirror h2_dictionary()
  for (double a : {0.5, 1.0, 2.0}) {
    double sc = 1.0 / (a * std::max(1.0, a));
    // E sin(aX) = Im phi(a)
    take(sc * phi_f(a).imag(), sc * phi_y(a).imag());
  }
  for (double a : {0.5, 1.0, 2.0}) {
    double sc = std::min(1.0 / a, 1.0 / (2.0 / (3.0 * std::sqrt(3.0)) * 2.0 * a * a));
    // E tanh(aX) = (1/a) int_0^inf Im phi(s) / sinh(pi s / (2a)) ds
    auto e_tanh = [&](auto&& phi) {
      auto g = [&](double s) { return phi(s).imag() / std::sinh(pi * s / (2.0 * a)); };
      return gauss_kronrod<double, 31>::integrate(g, 0.0, 60.0, 12, 1e-11) / a;
    };
    take(sc * e_tanh(phi_f), sc * e_tanh(phi_y));
  }
  for (auto [c, w] : {std::pair{0.0, 1.0}, {1.0, 1.0}, {-1.0, 1.0}, {0.0, 2.0}}) {
    double sc = std::min(w * std::sqrt(std::exp(1.0)), w * w);
    // E exp(-(X-c)^2 / (2 w^2))
    //   = (w / sqrt(2 pi)) int_R e^{-w^2 s^2 / 2} Re[e^{-i c s} phi(s)] ds
    auto e_bump = [&, c = c, w = w](auto&& phi) {
      auto g = [&](double s) {
        return std::exp(-0.5 * w * w * s * s) *
               (std::exp(std::complex<double>(0.0, -c * s)) * phi(s)).real();
      };
      double half = gauss_kronrod<double, 31>::integrate(g, 0.0, 10.0 / w, 12, 1e-11);
      return 2.0 * half * w / std::sqrt(2.0 * pi);
    };
    take(sc * e_bump(phi_f), sc * e_bump(phi_y));
  }
  return best;
}

RateFit rate_fit(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 4) throw std::invalid_argument("rate_fit: need at least 4 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  const double n = static_cast<double>(points.size());
  for (auto [x, y] : points) {
    if (!(x > 0.0) || !(y > 0.0))
      throw std::invalid_argument("rate_fit: coordinates must be positive");
    double lx = std::log(x), ly = std::log(y);
    sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly; syy += ly * ly;
  }
  double vxx = sxx - sx * sx / n;
  double vxy = sxy - sx * sy / n;
  double vyy = syy - sy * sy / n;
  double slope = vxy / vxx;
  double intercept = (sy - slope * sx) / n;
  double r2 = (vyy > 0.0) ? (vxy * vxy) / (vxx * vyy) : 1.0;
  return {slope, intercept, r2};
}

BoundReport bound_report(const SecondChaosElement& F, const VgParams& p, std::size_t n_mc,
                         std::uint64_t seed, int n_batches) {
  p.require_centered("bound_report");
  require_matched_kappa2(F, p, "bound_report");
  BoundReport rep;
  auto ms = m_statistic(F, p);
  rep.M = ms.M;
  rep.M_prime = ms.M_prime;
  rep.six_moment_bound = six_moment_bound(F, p);
  rep.clean_bound = clean_bound(F, p);
  rep.constants = ms_constants(p);
  auto ky = cumulants_2_to_6(p);
  for (int l = 0; l < 5; ++l) rep.cumulant_table[l] = {F.cumulant(l + 2), ky[l]};

  // batched two-sample W1 between F and Y; n_mc is the total budget, split
  // into fixed per-batch seeds
  const std::size_t per_batch = std::max<std::size_t>(n_mc / n_batches, 2);
  std::vector<double> w1(n_batches);
  parallel_for(n_batches, [&](std::size_t b) {
    auto xs = F.sample(per_batch, CounterRng::mix(seed + 101 * b + 1));
    auto ys = sample(p, per_batch, CounterRng::mix(seed + 101 * b + 2));
    w1[b] = empirical_w1(std::move(xs), std::move(ys));
  });
  double mean = 0.0, var = 0.0;
  for (double v : w1) mean += v;
  mean /= n_batches;
  for (double v : w1) var += (v - mean) * (v - mean);
  var /= (n_batches - 1);
  rep.w1_hat = mean;
  rep.w1_se = std::sqrt(var / n_batches);

  auto xs = F.sample(n_mc, CounterRng::mix(seed + 7));
  rep.dh2_dictionary_lower = dh2_dictionary_lower(xs, p);
  rep.dh2_dictionary_lower_cf = dh2_dictionary_lower_cf(F, p);
  return rep;
}

SecondChaosElement interpolating_family(const std::vector<double>& c_target,
                                        const std::vector<double>& c_pert, double t,
                                        double kappa2_target) {
  std::size_t m = std::max(c_target.size(), c_pert.size());
  std::vector<double> v(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    double a = i < c_target.size() ? c_target[i] : 0.0;
    double b = i < c_pert.size() ? c_pert[i] : 0.0;
    v[i] = (1.0 - t) * a + t * b;
  }
  std::erase_if(v, [](double x) { return x == 0.0; });
  return SecondChaosElement(std::move(v)).rescaled_to_kappa2(kappa2_target);
}

std::vector<RateRow> interpolation_rate_experiment(const std::vector<double>& c_target,
                                                   const std::vector<double>& c_pert,
                                                   const VgParams& p, int k_max, std::size_t n_mc,
                                                   std::uint64_t seed) {
  std::vector<RateRow> rows;
  for (int k = 1; k <= k_max; ++k) {
    double t = std::ldexp(1.0, -k);
    auto F = interpolating_family(c_target, c_pert, t, p.variance());
    auto rep = bound_report(F, p, n_mc, CounterRng::mix(seed + 977 * k), 20);
    rows.push_back({t, rep.M, rep.w1_hat, rep.w1_se, rep.dh2_dictionary_lower,
                    rep.dh2_dictionary_lower_cf, rep.six_moment_bound});
  }
  return rows;
}

std::string rate_rows_to_csv(const std::vector<RateRow>& rows) {
  std::string out = "t,M,w1_hat,w1_se,dict_lower,dict_lower_cf,six_moment_bound\n";
  char buf[320];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.t, r.M,
                  r.w1_hat, r.w1_se, r.dict_lower, r.dict_lower_cf, r.six_moment);
    out += buf;
  }
  return out;
}

std::string BoundReport::to_json() const {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["M"] = M;
  j["M_prime"] = M_prime;
  j["six_moment_bound"] = six_moment_bound;
  j["clean_bound"] = clean_bound;
  j["w1_hat"] = w1_hat;
  j["w1_se"] = w1_se;
  j["dh2_dictionary_lower"] = dh2_dictionary_lower;
  j["dh2_dictionary_lower_cf"] = dh2_dictionary_lower_cf;
  j["constants"] = {{"C1", constants.C1}, {"C2", constants.C2}, {"A_r", constants.A_r},
                    {"B_r", constants.B_r}};
  nlohmann::json table = nlohmann::json::array();
  for (int l = 0; l < 5; ++l)
    table.push_back({{"ell", l + 2}, {"F", cumulant_table[l][0]}, {"Y", cumulant_table[l][1]}});
  j["cumulant_table"] = table;
  return j.dump(2);
}

}  // namespace vgc
