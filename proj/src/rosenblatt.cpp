#include "vgchaos/rosenblatt.hpp"

#include "vgchaos/bounds.hpp"
#include "vgchaos/parallel.hpp"
#include "vgchaos/rng.hpp"
#include "vgchaos/special_functions.hpp"

#include <Eigen/Dense>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace vgc {
namespace rosenblatt {

namespace {

// radical-inverse Halton point, bases for up to 6 dimensions
constexpr int kBases[6] = {2, 3, 5, 7, 11, 13};

double radical_inverse(std::uint64_t n, int base) {
  double inv = 1.0 / base, f = inv, x = 0.0;
  while (n > 0) {
    x += f * static_cast<double>(n % base);
    n /= base;
    f *= inv;
  }
  return x;
}

}  // namespace

RosenblattSpec::RosenblattSpec(double g1, double g2) : gamma1(g1), gamma2(g2) { validate(); }

void RosenblattSpec::validate() const {
  auto inside = [](double g) { return g > -1.0 && g < -0.5; };
  if (!inside(gamma1) || !inside(gamma2) || !(gamma1 + gamma2 > -1.5))
    throw std::invalid_argument("RosenblattSpec: (gamma1, gamma2) outside the admissible triangle");
  if (T < 0.0) throw std::invalid_argument("RosenblattSpec: T must be >= 0 (0 = automatic)");
  if (n_nodes < 16 || n_s_nodes < 16)
    throw std::invalid_argument("RosenblattSpec: too few mesh cells");
}

RhoCase::RhoCase(double rho_) : rho(rho_) {
  if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("RhoCase: rho must be in (0, 1)");
  double denom = std::sqrt(1.0 / (2.0 * rho) + 2.0 / ((rho + 1.0) * (rho + 1.0)));
  alpha_rho = (1.0 / (2.0 * std::sqrt(rho)) + 1.0 / (rho + 1.0)) / denom;
  beta_rho = (1.0 / (2.0 * std::sqrt(rho)) - 1.0 / (rho + 1.0)) / denom;
}

double reduced_kernel(double ga, double gb, double s, double t) {
  if (s == t) return std::numeric_limits<double>::infinity();
  const double m = -1.0 - ga - gb;
  if (!(ga > -1.0) || !(gb > -1.0) || !(m > 0.0))
    throw std::invalid_argument("reduced_kernel: exponents outside the admissible range");
  if (s > t) return beta_fn(gb + 1.0, m) * std::pow(s - t, 1.0 + ga + gb);
  return beta_fn(ga + 1.0, m) * std::pow(t - s, 1.0 + ga + gb);
}

double chaos_kernel(const RosenblattSpec& spec, double x1, double x2) {
  if (x1 > 1.0 || x2 > 1.0)
    throw std::invalid_argument("chaos_kernel: requires x1, x2 <= 1");
  boost::math::quadrature::tanh_sinh<double> ts;
  auto g = [&](double ga, double gb, double a, double b) {
    // int_lo^1 (s-a)^ga (s-b)^gb ds, supported on s > max(a,b)
    double lo = std::clamp(std::max(a, b), 0.0, 1.0);
    if (lo >= 1.0) return 0.0;
    auto f = [&](double s) { return std::pow(s - a, ga) * std::pow(s - b, gb); };
    return ts.integrate(f, lo, 1.0);
  };
  return 0.5 * (g(spec.gamma1, spec.gamma2, x1, x2) + g(spec.gamma1, spec.gamma2, x2, x1));
}

namespace {

// symmetric graded mesh on [0,1]: edge(t) = t^q / (t^q + (1-t)^q)
std::vector<double> graded_unit_mesh(int n_cells, double q) {
  std::vector<double> edges(n_cells + 1);
  for (int j = 0; j <= n_cells; ++j) {
    double t = static_cast<double>(j) / n_cells;
    double a = std::pow(t, q), b = std::pow(1.0 - t, q);
    edges[j] = (a + b > 0.0) ? a / (a + b) : 0.0;
  }
  edges.front() = 0.0;
  edges.back() = 1.0;
  return edges;
}

// The x-integral mass of the kernel spreads over |x| up to exp(1/|2g+1|)
// scales as the exponents approach -1/2, so the truncation point has to grow
// accordingly; log-spaced cells keep the cell count bounded.
double effective_log_T(const RosenblattSpec& spec) {
  if (spec.T > 0.0) return std::log(spec.T);
  double gmax = std::max(spec.gamma1, spec.gamma2);
  double rate = std::abs(2.0 * gmax + 1.0);
  return std::clamp(8.0 / std::max(rate, 1e-6), std::log(50.0), 300.0);
}

// x-mesh on [-T, 1]: graded cells inside [0,1] and on [-1,0], log-spaced on
// [-T, -1]
std::vector<double> x_mesh(const RosenblattSpec& spec) {
  const double logT = effective_log_T(spec);
  int n_in = static_cast<int>(0.4 * spec.n_nodes);
  int n_mid = static_cast<int>(0.2 * spec.n_nodes);
  int n_log = spec.n_nodes - n_in - n_mid;
  std::vector<double> edges;
  for (int j = n_log; j >= 1; --j)
    edges.push_back(-std::exp(logT * static_cast<double>(j) / n_log));
  for (int j = n_mid; j >= 1; --j)
    edges.push_back(-std::pow(static_cast<double>(j) / n_mid, spec.mesh_exponent));
  for (double e : graded_unit_mesh(n_in, spec.mesh_exponent)) edges.push_back(e);
  return edges;
}

// Exact integral of (s - x)_+^gamma over an (s-cell x x-cell) rectangle via
// the closed-form double antiderivative. For x-cells left of the s-cell the
// four-term difference cancels catastrophically, so the inner difference is
// taken with expm1/log1p first.
double cell_integral(double gamma, double sa, double sb, double xa, double xb) {
  const long double g2 = static_cast<long double>(gamma) + 2.0L;
  const long double denom = (static_cast<long double>(gamma) + 1.0L) * g2;
  auto phi = [&](long double u) -> long double {
    if (u <= 0.0L) return 0.0L;
    return std::pow(u, g2) / denom;
  };
  if (xb <= sa) {
    // I(x) = phi(sb-x) - phi(sa-x), stable; exact D = I(xa) - I(xb)
    auto inner = [&](long double x) -> long double {
      long double d = static_cast<long double>(sa) - x;
      if (d <= 0.0L) return phi(static_cast<long double>(sb) - x);
      return phi(d) * std::expm1(g2 * std::log1p((static_cast<long double>(sb) - sa) / d));
    };
    return static_cast<double>(inner(xa) - inner(xb));
  }
  long double v = phi(static_cast<long double>(sb) - xa) - phi(static_cast<long double>(sb) - xb) -
                  phi(static_cast<long double>(sa) - xa) + phi(static_cast<long double>(sa) - xb);
  return static_cast<double>(v);
}

struct GalerkinPieces {
  Eigen::MatrixXd B1;  // n_s x n_x, exponent gamma1
  Eigen::MatrixXd B2;  // n_s x n_x, exponent gamma2
};

GalerkinPieces assemble(const RosenblattSpec& spec) {
  auto xe = x_mesh(spec);
  auto se = graded_unit_mesh(spec.n_s_nodes, spec.mesh_exponent);
  const int nx = static_cast<int>(xe.size()) - 1;
  const int ns = static_cast<int>(se.size()) - 1;
  GalerkinPieces gp{Eigen::MatrixXd(ns, nx), Eigen::MatrixXd(ns, nx)};
  parallel_for(static_cast<std::size_t>(ns), [&](std::size_t k) {
    double sa = se[k], sb = se[k + 1];
    double vs = std::sqrt(sb - sa);
    for (int i = 0; i < nx; ++i) {
      double xa = xe[i], xb = xe[i + 1];
      double wx = std::sqrt(xb - xa);
      gp.B1(k, i) = cell_integral(spec.gamma1, sa, sb, xa, xb) / (vs * wx);
      gp.B2(k, i) = cell_integral(spec.gamma2, sa, sb, xa, xb) / (vs * wx);
    }
  });
  return gp;
}

}  // namespace

double kappa2_closed_form(const RosenblattSpec& spec) {
  const double g1 = spec.gamma1, g2 = spec.gamma2;
  const double m = -1.0 - g1 - g2;
  const double q = 2.0 + 2.0 * (g1 + g2);
  double cross = beta_fn(g1 + 1.0, m) * beta_fn(g2 + 1.0, m);
  double same = beta_fn(g1 + 1.0, -1.0 - 2.0 * g1) * beta_fn(g2 + 1.0, -1.0 - 2.0 * g2);
  double tr2 = (cross + same) / ((q + 1.0) * (q + 2.0));
  return 2.0 * tr2;  // kappa_2 at A = 1 on the untruncated domain
}

SecondChaosElement spectrum(const RosenblattSpec& spec) {
  auto gp = assemble(spec);
  Eigen::MatrixXd M =
      0.5 * (gp.B1.transpose() * gp.B2 + gp.B2.transpose() * gp.B1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(M);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("rosenblatt::spectrum: eigensolver failed");
  Eigen::VectorXd ev = solver.eigenvalues();
  double peak = ev.cwiseAbs().maxCoeff();
  std::vector<double> kept;
  kept.reserve(ev.size());
  for (int i = 0; i < ev.size(); ++i)
    if (std::abs(ev[i]) > 1e-10 * peak) kept.push_back(ev[i]);
  std::sort(kept.begin(), kept.end(), [](double a, double b) { return std::abs(a) > std::abs(b); });
  return SecondChaosElement(std::move(kept)).rescaled_to_kappa2(1.0);
}

double spectrum_cumulant_extrapolated(const RosenblattSpec& spec, int p) {
  spec.validate();
  double k[3];
  for (int lvl = 0; lvl < 3; ++lvl) {
    RosenblattSpec s = spec;
    s.n_nodes = spec.n_nodes >> (2 - lvl);
    s.n_s_nodes = spec.n_s_nodes >> (2 - lvl);
    k[lvl] = spectrum(s).cumulant(p);
  }
  // Aitken delta-squared; falls back to the finest value when the sequence
  // is not contracting (already converged or non-monotone)
  double d1 = k[1] - k[0], d2 = k[2] - k[1];
  double denom = d1 - d2;
  if (std::abs(denom) < 1e-14 * std::abs(k[2]) || !(d2 / d1 > 0.0) || !(d2 / d1 < 1.0))
    return k[2];
  return k[2] + d2 * d2 / denom;
}

McEstimate cumulant_trace_mc(const RosenblattSpec& spec, int p, std::size_t n_mc,
                             std::uint64_t seed) {
  if (p < 2 || p > 6) throw std::invalid_argument("cumulant_trace_mc: p must be in [2, 6]");
  const double g1 = spec.gamma1, g2 = spec.gamma2;
  const double m12 = -1.0 - g1 - g2;
  // RK coefficient table: coef[a][b] applies when the first argument is the
  // larger one; a, b index {gamma1, gamma2}
  const double B1m = beta_fn(g1 + 1.0, m12);
  const double B2m = beta_fn(g2 + 1.0, m12);
  const double B11 = beta_fn(g1 + 1.0, -1.0 - 2.0 * g1);
  const double B22 = beta_fn(g2 + 1.0, -1.0 - 2.0 * g2);
  // coef_hi[a][b]: RK(ga, gb, s, t) = coef * |s-t|^{1+ga+gb} with s > t picks B(gb+1),
  // s < t picks B(ga+1)
  auto coef = [&](int a, int b, bool first_larger) {
    if (a != b) return first_larger ? (b == 0 ? B1m : B2m) : (a == 0 ? B1m : B2m);
    if (a == 0) return B11;
    return B22;
  };
  const double exps[2][2] = {{1.0 + 2.0 * g1, 1.0 + g1 + g2},
                             {1.0 + g1 + g2, 1.0 + 2.0 * g2}};

  // pattern bit 0 => factor g (L = gamma1, R = gamma2); bit 1 => transposed
  const int n_patterns = 1 << p;
  const int fact[7] = {1, 1, 2, 6, 24, 120, 720};
  const double outer = std::pow(2.0, p - 1) * fact[p - 1] * std::pow(0.5, p);

  auto integrand = [&](const double* s) {
    double dist[6], sign_first_larger[6];
    for (int i = 0; i < p; ++i) {
      int j = (i + 1) % p;
      dist[i] = std::abs(s[i] - s[j]);
      sign_first_larger[i] = s[i] > s[j];
    }
    if (*std::min_element(dist, dist + p) == 0.0) return 0.0;
    double total = 0.0;
    for (int pat = 0; pat < n_patterns; ++pat) {
      double prod = 1.0;
      for (int i = 0; i < p; ++i) {
        int j = (i + 1) % p;
        int Ri = (pat >> i & 1) ? 0 : 1;  // g: R = gamma2 (index 1); g^T: R = gamma1
        int Lj = (pat >> j & 1) ? 1 : 0;  // g: L = gamma1 (index 0); g^T: L = gamma2
        prod *= coef(Ri, Lj, sign_first_larger[i] != 0.0) * std::pow(dist[i], exps[Ri][Lj]);
      }
      total += prod;
    }
    return total;
  };

  // Importance sampling along the chain s_1 -> s_2 -> ... with per-step
  // density ~ |s_i - s_{i-1}|^a, a the most singular edge exponent; without it
  // the estimator has infinite variance once gamma1 + gamma2 drops below -4/3.
  // (The remaining closing-edge factor keeps the variance finite only for
  // min(gamma) > -3/4, which covers the admissible sweeps here.)
  const double a = 1.0 + 2.0 * std::min(g1, g2);
  const double ap1 = a + 1.0;
  auto chain_step = [&](double x, double u, double& w) {
    double ml = std::pow(x, ap1) / ap1;
    double mr = std::pow(1.0 - x, ap1) / ap1;
    double z = ml + mr;
    double m = u * z, t, delta;
    if (m < ml) {
      delta = x * std::pow(1.0 - m / ml, 1.0 / ap1);
      t = x - delta;
    } else {
      delta = (1.0 - x) * std::pow((m - ml) / mr, 1.0 / ap1);
      t = x + delta;
    }
    w *= (delta > 0.0) ? z * std::pow(delta, -a) : 0.0;
    return t;
  };

  const int n_batches = 20;
  const std::size_t per_batch = std::max<std::size_t>(n_mc / n_batches, 64);
  std::vector<double> batch(n_batches);
  CounterRng rng(seed, 0x6d63);
  parallel_for(n_batches, [&](std::size_t b) {
    double shift[6];
    for (int d = 0; d < p; ++d) shift[d] = rng.u01(b, d);
    double acc = 0.0;
    for (std::size_t k = 0; k < per_batch; ++k) {
      double u[6], s[6];
      for (int d = 0; d < p; ++d) {
        double v = radical_inverse(k + 1, kBases[d]) + shift[d];
        u[d] = v - std::floor(v);
      }
      double w = 1.0;
      s[0] = u[0];
      for (int d = 1; d < p; ++d) s[d] = chain_step(s[d - 1], u[d], w);
      if (w > 0.0) acc += w * integrand(s);
    }
    batch[b] = outer * acc / per_batch;
  });

  double mean = 0.0, var = 0.0;
  for (double v : batch) mean += v;
  mean /= n_batches;
  for (double v : batch) var += (v - mean) * (v - mean);
  var /= (n_batches - 1);

  // normalize by the closed-form kappa_2 (the A rescale): kappa_p ~ A^p
  double k2 = kappa2_closed_form(spec);
  double scale = std::pow(k2, -0.5 * p);
  return {mean * scale, std::sqrt(var / n_batches) * scale};
}

VgParams target_vg(LimitCase c, double rho) {
  if (c == LimitCase::a) return VgParams(1.0, 0.0, 1.0);
  RhoCase rc(rho);
  return VgParams(1.0, (rc.alpha_rho - rc.beta_rho) / std::sqrt(2.0),
                  std::sqrt(2.0 * rc.alpha_rho * rc.beta_rho));
}

double case_b_gamma2(double gamma1, double rho) {
  if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("case_b_gamma2: rho must be in (0,1)");
  return (gamma1 + 0.5) / rho - 0.5;
}

namespace {

RateExperimentResult run_sweep(const VgParams& target, const std::vector<double>& gamma1_sweep,
                               const std::function<double(double)>& gamma2_of,
                               const RosenblattSpec& tmpl, std::size_t n_mc, std::uint64_t seed) {
  RateExperimentResult res{};
  for (std::size_t idx = 0; idx < gamma1_sweep.size(); ++idx) {
    double g1 = gamma1_sweep[idx];
    double g2 = gamma2_of(g1);
    RosenblattSpec spec = tmpl;
    spec.gamma1 = g1;
    spec.gamma2 = g2;
    spec.validate();
    auto F = spectrum(spec);
    auto rep = bound_report(F, target, n_mc, CounterRng::mix(seed + 31 * idx + 5), 20);
    SweepRow row{};
    row.gamma1 = g1;
    row.gamma2 = g2;
    row.eps = -g1 - 0.5;
    row.M = rep.M;
    for (int l = 0; l < 4; ++l)
      row.kappa_diff[l] = std::abs(rep.cumulant_table[l + 1][0] - rep.cumulant_table[l + 1][1]);
    row.six_moment_bound = rep.six_moment_bound;
    row.w1_hat = rep.w1_hat;
    row.w1_se = rep.w1_se;
    row.dict_lower = rep.dh2_dictionary_lower;
    res.rows.push_back(row);
  }

  auto fit_against_eps = [&](auto getter) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& r : res.rows) pts.push_back({r.eps, getter(r)});
    return rate_fit(pts).slope;
  };
  res.slope_M = fit_against_eps([](const SweepRow& r) { return r.M; });
  for (int l = 0; l < 4; ++l)
    res.slope_kappa[l] = fit_against_eps([l](const SweepRow& r) { return r.kappa_diff[l]; });
  res.slope_six_moment = fit_against_eps([](const SweepRow& r) { return r.six_moment_bound; });
  return res;
}

}  // namespace

RateExperimentResult rate_experiment(LimitCase c, double rho,
                                     const std::vector<double>& gamma1_sweep,
                                     const RosenblattSpec& tmpl, std::size_t n_mc,
                                     std::uint64_t seed) {
  if (c == LimitCase::a)
    return run_sweep(target_vg(c), gamma1_sweep, [](double g1) { return g1; }, tmpl, n_mc, seed);
  return run_sweep(target_vg(c, rho), gamma1_sweep,
                   [rho](double g1) {
                     double g2 = case_b_gamma2(g1, rho);
                     if (!(g1 >= g2))
                       throw std::invalid_argument("rate_experiment: case b requires gamma1 >= gamma2");
                     return g2;
                   },
                   tmpl, n_mc, seed);
}

RateExperimentResult rate_experiment_fixed_gamma2(const std::vector<double>& gamma1_sweep,
                                                  double gamma2, const RosenblattSpec& tmpl,
                                                  std::size_t n_mc, std::uint64_t seed) {
  return run_sweep(target_vg(LimitCase::a), gamma1_sweep, [gamma2](double) { return gamma2; },
                   tmpl, n_mc, seed);
}

std::string RateExperimentResult::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "gamma1,gamma2,eps,M,kdiff3,kdiff4,kdiff5,kdiff6,six_moment_bound,w1_hat,w1_se,dict_lower\n";
  for (const auto& r : rows) {
    os << r.gamma1 << ',' << r.gamma2 << ',' << r.eps << ',' << r.M;
    for (double k : r.kappa_diff) os << ',' << k;
    os << ',' << r.six_moment_bound << ',' << r.w1_hat << ',' << r.w1_se << ',' << r.dict_lower
       << '\n';
  }
  return os.str();
}

std::string RateExperimentResult::summary_json() const {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["slope_M"] = slope_M;
  j["slope_kappa"] = {{"k3", slope_kappa[0]}, {"k4", slope_kappa[1]}, {"k5", slope_kappa[2]},
                      {"k6", slope_kappa[3]}};
  j["slope_six_moment_bound"] = slope_six_moment;
  return j.dump(2);
}

}  // namespace rosenblatt
}  // namespace vgc
