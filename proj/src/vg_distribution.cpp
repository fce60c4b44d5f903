#include "vgchaos/vg_distribution.hpp"

#include "vgchaos/rng.hpp"
#include "vgchaos/special_functions.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace vgc {

namespace {
constexpr double kPi = 3.14159265358979323846;

void validate(double r, double sigma) {
  if (!(r > 0.0)) throw std::invalid_argument("VgParams: r must be > 0");
  if (!(sigma > 0.0)) throw std::invalid_argument("VgParams: sigma must be > 0");
}

// Split theta, sigma into the two exponential rates: theta = a - b, sigma^2 = 4ab.
std::pair<double, double> rate_split(double theta, double sigma) {
  double s = std::sqrt(theta * theta + sigma * sigma);
  return {0.5 * (s + theta), 0.5 * (s - theta)};
}
}  // namespace

VgParams::VgParams(double r_, double theta_, double sigma_)
    : r(r_), theta(theta_), sigma(sigma_), mu(-r_ * theta_) {
  validate(r, sigma);
}

VgParams::VgParams(double r_, double theta_, double sigma_, double mu_)
    : r(r_), theta(theta_), sigma(sigma_), mu(mu_) {
  validate(r, sigma);
}

bool VgParams::centered() const { return mu == -r * theta; }

void VgParams::require_centered(const char* what) const {
  if (!centered())
    throw std::invalid_argument(std::string(what) + ": requires the centered family (mu = -r*theta)");
}

double VgParams::alpha() const { return std::sqrt(theta * theta + sigma * sigma) / (sigma * sigma); }

ChaosVgParams::ChaosVgParams(double alpha_, double beta_, int r_)
    : alpha(alpha_), beta(beta_), r(r_) {
  if (!(alpha > 0.0) || !(beta > 0.0))
    throw std::invalid_argument("ChaosVgParams: alpha, beta must be > 0");
  if (r < 1) throw std::invalid_argument("ChaosVgParams: r must be a positive integer");
}

double density(const VgParams& p, double x) {
  const double nu = p.nu();
  const double s2 = p.sigma * p.sigma;
  const double root = std::sqrt(p.theta * p.theta + s2);
  const double d = x - p.mu;
  const double norm = 1.0 / (p.sigma * std::sqrt(kPi) * gamma_fn(0.5 * p.r));
  if (d == 0.0) {
    if (p.r <= 1.0) return std::numeric_limits<double>::infinity();
    // |d|^nu K_nu(alpha |d|) -> Gamma(nu)/2 * (sigma^2/root)^nu as d -> 0
    return norm * 0.5 * gamma_fn(nu) * std::pow(s2 / (root * root), nu);
  }
  const double ad = std::abs(d);
  // log-combined to stay finite deep in the tails
  double log_val = p.theta * d / s2 + nu * std::log(ad / (2.0 * root)) - root * ad / s2 +
                   std::log(bessel_k_scaled(nu, root * ad / s2));
  return norm * std::exp(log_val);
}

double vg_cumulant(const VgParams& p, int order) {
  p.require_centered("vg_cumulant");
  if (order < 2 || order > 12) throw std::invalid_argument("vg_cumulant: order must be in [2, 12]");
  auto [a, b] = rate_split(p.theta, p.sigma);
  double fact = 1.0;
  for (int k = 1; k < order; ++k) fact *= k;  // (order-1)!
  double sign = (order % 2 == 0) ? 1.0 : -1.0;
  return std::pow(2.0, order - 1) * fact * p.r *
         (std::pow(a, order) + sign * std::pow(b, order));
}

std::array<double, 5> cumulants_2_to_6(const VgParams& p) {
  p.require_centered("cumulants_2_to_6");
  const double r = p.r, th = p.theta, s2 = p.sigma * p.sigma;
  const double th2 = th * th;
  return {r * (s2 + 2.0 * th2),
          2.0 * r * th * (3.0 * s2 + 4.0 * th2),
          6.0 * r * (s2 * s2 + 8.0 * s2 * th2 + 8.0 * th2 * th2),
          24.0 * r * th * (5.0 * s2 * s2 + 20.0 * s2 * th2 + 16.0 * th2 * th2),
          120.0 * r * (s2 + 2.0 * th2) * (s2 * s2 + 16.0 * s2 * th2 + 16.0 * th2 * th2)};
}

std::vector<double> sample(const VgParams& p, std::size_t n, std::uint64_t seed) {
  p.require_centered("sample");
  CounterRng rng(seed, /*stream=*/0x5647);  // "VG"
  std::vector<double> out(n);
  const double shape = 0.5 * p.r;
  for (std::size_t i = 0; i < n; ++i) {
    double g = 2.0 * rng.gamma(i, shape);  // Gamma(r/2, rate 1/2)
    double z = rng.normal(i, 0);
    out[i] = p.theta * (g - p.r) + p.sigma * std::sqrt(g) * z;
  }
  return out;
}

std::complex<double> char_fn_inv_sq(const VgParams& p, double t) {
  p.require_centered("char_fn_inv_sq");
  std::complex<double> i(0.0, 1.0);
  std::complex<double> quad = 1.0 - 2.0 * i * p.theta * t + p.sigma * p.sigma * t * t;
  return std::exp(2.0 * i * t * p.theta * p.r) * std::pow(quad, p.r);
}

std::complex<double> char_fn(const VgParams& p, double t) {
  p.require_centered("char_fn");
  std::complex<double> i(0.0, 1.0);
  std::complex<double> quad = 1.0 - 2.0 * i * p.theta * t + p.sigma * p.sigma * t * t;
  // Re(quad) = 1 + sigma^2 t^2 > 0, so the principal branch is continuous in t
  return std::exp(-i * t * p.theta * p.r) * std::pow(quad, -0.5 * p.r);
}

VgParams from_chaos_params(const ChaosVgParams& c) {
  return VgParams(static_cast<double>(c.r), c.alpha - c.beta, 2.0 * std::sqrt(c.alpha * c.beta));
}

double gamma_lin_variance_vg(const VgParams& p, int ell) {
  p.require_centered("gamma_lin_variance_vg");
  if (ell < 1) throw std::invalid_argument("gamma_lin_variance_vg: ell must be >= 1");
  double fact = 1.0;
  std::array<double, 5> f{};  // (2l-1)!, (2l)!, ..., (2l+3)!
  for (int k = 1; k <= 2 * ell + 3; ++k) {
    fact *= k;
    if (k >= 2 * ell - 1) f[k - (2 * ell - 1)] = fact;
  }
  const double th = p.theta, s2 = p.sigma * p.sigma;
  return vg_cumulant(p, 2 * ell + 4) / f[4] - 4.0 * th * vg_cumulant(p, 2 * ell + 3) / f[3] +
         (4.0 * th * th - 2.0 * s2) * vg_cumulant(p, 2 * ell + 2) / f[2] +
         4.0 * th * s2 * vg_cumulant(p, 2 * ell + 1) / f[1] +
         s2 * s2 * vg_cumulant(p, 2 * ell) / f[0];
}

std::pair<double, double> mass_window(const VgParams& p, double eps) {
  auto [a, b] = rate_split(p.theta, p.sigma);
  // tail rates: right e^{-x/(2a)}, left e^{-|x|/(2b)} (from the difference-of-gammas form)
  double L = -std::log(eps) + 12.0 + 4.0 * std::log1p(p.r);
  double hi = p.mu + 2.0 * a * L;
  double lo = p.mu - 2.0 * b * L;
  return {lo, hi};
}

double expect(const VgParams& p, const std::function<double(double)>& h) {
  auto [lo, hi] = mass_window(p);
  boost::math::quadrature::tanh_sinh<double> integrator;
  auto f = [&](double x) {
    double d = density(p, x);
    return std::isfinite(d) ? h(x) * d : 0.0;
  };
  // split at mu: the density has a kink (or an integrable singularity) there
  return integrator.integrate(f, lo, p.mu) + integrator.integrate(f, p.mu, hi);
}

}  // namespace vgc
