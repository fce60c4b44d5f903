#include "vgchaos/second_chaos.hpp"

#include "vgchaos/rng.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vgc {

namespace {
double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}
}  // namespace

SecondChaosElement::SecondChaosElement(std::vector<double> eigenvalues)
    : c_(std::move(eigenvalues)) {
  if (c_.empty()) throw std::invalid_argument("SecondChaosElement: empty spectrum");
  for (double v : c_)
    if (v == 0.0 || !std::isfinite(v))
      throw std::invalid_argument("SecondChaosElement: eigenvalues must be nonzero and finite");
}

double SecondChaosElement::power_sum(int p) const {
  double s = 0.0;
  for (double v : c_) s += std::pow(v, p);
  return s;
}

double SecondChaosElement::cumulant(int p) const {
  if (p < 2 || p > 12)
    throw std::invalid_argument("SecondChaosElement::cumulant: order must be in [2, 12]");
  return std::pow(2.0, p - 1) * factorial(p - 1) * power_sum(p);
}

std::vector<double> SecondChaosElement::sample(std::size_t n, std::uint64_t seed) const {
  CounterRng rng(seed, /*stream=*/0x2c5);
  std::vector<double> out(n);
  const std::size_t m = c_.size();
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      double z = rng.normal(i, j);
      acc += c_[j] * (z * z - 1.0);
    }
    out[i] = acc;
  }
  return out;
}

SecondChaosElement SecondChaosElement::rescaled_to_kappa2(double target) const {
  if (!(target > 0.0))
    throw std::invalid_argument("rescaled_to_kappa2: target must be > 0");
  double scale = std::sqrt(target / cumulant(2));
  std::vector<double> v = c_;
  for (double& x : v) x *= scale;
  return SecondChaosElement(std::move(v));
}

std::string SecondChaosElement::to_json() const {
  return nlohmann::json(c_).dump();
}

SecondChaosElement SecondChaosElement::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_array())
    throw std::invalid_argument("spectrum JSON must be an array of reals");
  return SecondChaosElement(j.get<std::vector<double>>());
}

std::complex<double> char_fn(const SecondChaosElement& F, double t) {
  std::complex<double> i(0.0, 1.0);
  std::complex<double> log_phi = 0.0;
  // each base 1 - 2 i c t has real part 1, so the principal log is continuous
  for (double c : F.eigenvalues()) log_phi += -0.5 * std::log(1.0 - 2.0 * i * c * t) - i * c * t;
  return std::exp(log_phi);
}

double gamma_mixed_mean(const SecondChaosElement& F, int ell, double theta, double sigma) {
  if (ell < 0) throw std::invalid_argument("gamma_mixed_mean: ell must be >= 0");
  auto kappa = [&](int p) { return p >= 2 ? F.cumulant(p) : 0.0; };
  return kappa(ell + 3) / factorial(ell + 2) - 2.0 * theta * kappa(ell + 2) / factorial(ell + 1) -
         sigma * sigma * kappa(ell + 1) / factorial(ell);
}

double gamma_lin_variance(const SecondChaosElement& F, int ell, double theta, double sigma) {
  if (ell < 1) throw std::invalid_argument("gamma_lin_variance: ell must be >= 1");
  const double s2 = sigma * sigma;
  double v = F.cumulant(2 * ell + 4) / factorial(2 * ell + 3) -
             4.0 * theta * F.cumulant(2 * ell + 3) / factorial(2 * ell + 2) +
             (4.0 * theta * theta - 2.0 * s2) * F.cumulant(2 * ell + 2) / factorial(2 * ell + 1) +
             4.0 * theta * s2 * F.cumulant(2 * ell + 1) / factorial(2 * ell) +
             s2 * s2 * F.cumulant(2 * ell) / factorial(2 * ell - 1);
  double scale = std::abs(F.cumulant(2 * ell + 4) / factorial(2 * ell + 3)) +
                 std::abs(s2 * s2 * F.cumulant(2 * ell) / factorial(2 * ell - 1));
  if (v < -1e-12 * std::max(scale, 1.0))
    throw std::runtime_error("gamma_lin_variance: negative value, internal inconsistency");
  return std::max(v, 0.0);
}

double gamma_lin_variance_spectral(const SecondChaosElement& F, int ell, double theta,
                                   double sigma) {
  if (ell < 1) throw std::invalid_argument("gamma_lin_variance_spectral: ell must be >= 1");
  const double a = std::pow(2.0, ell + 1);
  const double b = std::pow(2.0, ell - 1) * sigma * sigma;
  double s = 0.0;
  for (double c : F.eigenvalues()) {
    double cl = std::pow(c, ell);
    double d = a * cl * c * c - a * theta * cl * c - b * cl;
    s += d * d;
  }
  return 2.0 * s;
}

MStatistic m_statistic(const SecondChaosElement& F, const VgParams& Y) {
  Y.require_centered("m_statistic");
  auto ky = cumulants_2_to_6(Y);
  MStatistic out{0.0, 0.0, 2};
  for (int p = 2; p <= 6; ++p) {
    double diff = std::abs(F.cumulant(p) - ky[p - 2]);
    if (diff > out.M * (1.0 + 1e-12)) {
      out.M = diff;
      out.argmax_ell = p;
    }
    if (p != 5) out.M_prime = std::max(out.M_prime, diff);
  }
  return out;
}

std::array<double, 5> sample_cumulants_2_to_6(const std::vector<double>& xs) {
  if (xs.size() < 2) throw std::invalid_argument("sample_cumulants_2_to_6: need n >= 2");
  const double n = static_cast<double>(xs.size());
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  double m2 = 0, m3 = 0, m4 = 0, m5 = 0, m6 = 0;
  for (double x : xs) {
    double d = x - mean, d2 = d * d, d3 = d2 * d;
    m2 += d2;
    m3 += d3;
    m4 += d2 * d2;
    m5 += d2 * d3;
    m6 += d3 * d3;
  }
  m2 /= n; m3 /= n; m4 /= n; m5 /= n; m6 /= n;
  // moment -> cumulant polynomial (central moments)
  return {m2,
          m3,
          m4 - 3.0 * m2 * m2,
          m5 - 10.0 * m3 * m2,
          m6 - 15.0 * m4 * m2 - 10.0 * m3 * m3 + 30.0 * m2 * m2 * m2};
}

BatchedCumulants batched_cumulants(const std::vector<double>& xs, int n_batches) {
  if (n_batches < 2 || xs.size() < static_cast<std::size_t>(2 * n_batches))
    throw std::invalid_argument("batched_cumulants: need at least 2 points per batch");
  const std::size_t per = xs.size() / n_batches;
  std::array<double, 5> sum{}, sumsq{};
  for (int b = 0; b < n_batches; ++b) {
    std::vector<double> slice(xs.begin() + b * per, xs.begin() + (b + 1) * per);
    auto k = sample_cumulants_2_to_6(slice);
    for (int j = 0; j < 5; ++j) {
      sum[j] += k[j];
      sumsq[j] += k[j] * k[j];
    }
  }
  BatchedCumulants out{};
  for (int j = 0; j < 5; ++j) {
    double mean = sum[j] / n_batches;
    double var = (sumsq[j] - n_batches * mean * mean) / (n_batches - 1);
    out.mean[j] = mean;
    out.se[j] = std::sqrt(std::max(var, 0.0) / n_batches);
  }
  return out;
}

}  // namespace vgc
