#include "vgchaos/stein.hpp"

#include "vgchaos/parallel.hpp"
#include "vgchaos/special_functions.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace vgc {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Scaled Bessel I for possibly negative order (r < 1 gives nu in (-1/2, 0)):
// I_{-v}(x) = I_v(x) + (2/pi) sin(v pi) K_v(x).
double i_scaled_any(double nu, double x) {
  if (nu >= 0.0) return bessel_i_scaled(nu, x);
  double v = -nu;
  return bessel_i_scaled(v, x) + (2.0 / kPi) * std::sin(v * kPi) * bessel_k_scaled(v, x) * std::exp(-2.0 * x);
}

template <typename F>
double integrate_adaptive(const F& f, double a, double b, bool endpoint_singular) {
  if (a == b) return 0.0;
  if (endpoint_singular) {
    boost::math::quadrature::tanh_sinh<double> ts;
    return ts.integrate(f, a, b);
  }
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 14, 1e-10);
}

}  // namespace

SteinGrid::SteinGrid(double lo, double hi, int n, Spacing s)
    : x_min(lo), x_max(hi), n_points(n), spacing(s) {
  if (!(x_min < 0.0 && 0.0 < x_max))
    throw std::invalid_argument("SteinGrid: requires x_min < 0 < x_max");
  if (n_points < 64) throw std::invalid_argument("SteinGrid: n_points must be >= 64");
}

std::vector<double> SteinGrid::nodes() const {
  std::vector<double> xs(n_points);
  const double kappa = 2.5;  // grading strength toward x = 0
  for (int i = 0; i < n_points; ++i) {
    double t = static_cast<double>(i) / (n_points - 1);  // in [0,1]
    double x;
    if (spacing == Spacing::uniform) {
      x = x_min + t * (x_max - x_min);
    } else {
      // map each side of 0 through sinh so nodes cluster near the origin
      double split = -x_min / (x_max - x_min);
      if (t <= split) {
        double u = 1.0 - t / split;  // 1 at x_min, 0 at center
        x = x_min * std::sinh(kappa * u) / std::sinh(kappa);
      } else {
        double u = (t - split) / (1.0 - split);
        x = x_max * std::sinh(kappa * u) / std::sinh(kappa);
      }
    }
    if (std::abs(x) < 1e-8) x = 1e-8;
    xs[i] = x;
  }
  return xs;
}

SteinSolution solve(const VgParams& p, const std::function<double(double)>& h,
                    const SteinGrid& grid) {
  p.require_centered("stein::solve");
  const double nu = p.nu();
  const double al = p.alpha();
  const double be = p.beta();
  const double s2 = p.sigma * p.sigma;

  SteinSolution sol{grid, grid.nodes(), {}, {}, {}, {}, 0.0, 0.0};
  const std::size_t n = sol.x.size();
  sol.f.assign(n, 0.0);
  sol.f1.assign(n, 0.0);
  sol.f2.assign(n, 0.0);
  sol.pointwise_residual.assign(n, 0.0);

  sol.h_mean = expect(p, h);
  const double mu = p.mu;  // the operator degenerates at x = mu
  if (!(grid.x_min < mu && mu < grid.x_max))
    throw std::invalid_argument("stein::solve: grid must contain mu = -r*theta");
  // work in the shifted variable z = x - mu, where the representation's
  // Bessel weights live; h is still evaluated at the original coordinate
  auto ht = [&](double z) { return h(z + mu) - sol.h_mean; };

  // weights of the integral representation, with all exponentials expressed
  // relative to the evaluation point so nothing overflows
  const double tail_margin = 80.0;
  const bool singular_origin = nu < 0.0;

  auto eval_node = [&](std::size_t idx) {
    double x = sol.x[idx] - mu;
    if (std::abs(x) < 1e-8) x = 1e-8;
    const double ax = std::abs(x);
    const double pref = 1.0 / (s2 * std::pow(ax, nu));
    const double pk = bessel_k_scaled(nu, al * ax) * pref;
    const double pi_ = i_scaled_any(nu, al * ax) * pref;

    // inner integral (I-weight) from 0 to x; exponent (beta+alpha)(y-x) for
    // x>0 and (beta-alpha)(y-x) for x<0, both <= 0 on the segment
    auto w_inner = [&](double y) {
      double ay = std::abs(y);
      double e = be * (y - x) + al * (ay - ax);
      return std::exp(e) * std::pow(ay, nu) * i_scaled_any(nu, al * ay) * ht(y);
    };
    double inner = (x > 0.0) ? integrate_adaptive(w_inner, 0.0, x, singular_origin)
                             : -integrate_adaptive(w_inner, x, 0.0, singular_origin);

    // outer integral (K-weight): toward +inf for x>0, toward -inf for x<0
    auto w_outer = [&](double y) {
      double ay = std::abs(y);
      double e = be * (y - x) + al * (ax - ay);
      return std::exp(e) * std::pow(ay, nu) * bessel_k_scaled(nu, al * ay) * ht(y);
    };
    double outer;
    if (x > 0.0) {
      double y_up = x + tail_margin / (al - be);
      outer = integrate_adaptive(w_outer, x, y_up, false);
      sol.f[idx] = -(pk * inner + pi_ * outer);
    } else {
      double y_lo = x - tail_margin / (al + be);
      outer = integrate_adaptive(w_outer, y_lo, x, false);
      sol.f[idx] = -(pk * inner - pi_ * outer);
    }
  };
  parallel_for(n, eval_node);

  // derivatives by 3-point finite differences on the (possibly nonuniform) grid
  for (std::size_t i = 1; i + 1 < n; ++i) {
    double h1 = sol.x[i] - sol.x[i - 1];
    double h2 = sol.x[i + 1] - sol.x[i];
    sol.f1[i] = (-h2 / (h1 * (h1 + h2))) * sol.f[i - 1] + ((h2 - h1) / (h1 * h2)) * sol.f[i] +
                (h1 / (h2 * (h1 + h2))) * sol.f[i + 1];
    sol.f2[i] = 2.0 * (sol.f[i - 1] / (h1 * (h1 + h2)) - sol.f[i] / (h1 * h2) +
                       sol.f[i + 1] / (h2 * (h1 + h2)));
  }
  if (n >= 3) {
    sol.f1[0] = (sol.f[1] - sol.f[0]) / (sol.x[1] - sol.x[0]);
    sol.f1[n - 1] = (sol.f[n - 1] - sol.f[n - 2]) / (sol.x[n - 1] - sol.x[n - 2]);
    sol.f2[0] = sol.f2[1];
    sol.f2[n - 1] = sol.f2[n - 2];
  }

  for (std::size_t i = 1; i + 1 < n; ++i) {
    double x = sol.x[i];
    double lhs = s2 * (x + p.r * p.theta) * sol.f2[i] +
                 (s2 * p.r + 2.0 * p.theta * (x + p.r * p.theta)) * sol.f1[i] - x * sol.f[i];
    sol.pointwise_residual[i] = std::abs(lhs - (h(x) - sol.h_mean));
    sol.residual_max = std::max(sol.residual_max, sol.pointwise_residual[i]);
  }
  return sol;
}

double residual(const SteinSolution& sol, const VgParams& p,
                const std::function<double(double)>& h) {
  p.require_centered("stein::residual");
  const double s2 = p.sigma * p.sigma;
  const double h_mean = expect(p, h);
  double worst = 0.0;
  const std::size_t n = sol.x.size();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    double h1 = sol.x[i] - sol.x[i - 1];
    double h2 = sol.x[i + 1] - sol.x[i];
    double f1 = (-h2 / (h1 * (h1 + h2))) * sol.f[i - 1] + ((h2 - h1) / (h1 * h2)) * sol.f[i] +
                (h1 / (h2 * (h1 + h2))) * sol.f[i + 1];
    double f2 = 2.0 * (sol.f[i - 1] / (h1 * (h1 + h2)) - sol.f[i] / (h1 * h2) +
                       sol.f[i + 1] / (h2 * (h1 + h2)));
    double x = sol.x[i];
    double lhs = s2 * (x + p.r * p.theta) * f2 +
                 (s2 * p.r + 2.0 * p.theta * (x + p.r * p.theta)) * f1 - x * sol.f[i];
    worst = std::max(worst, std::abs(lhs - (h(x) - h_mean)));
  }
  return worst;
}

MsConstants ms_constants(const VgParams& p) {
  p.require_centered("ms_constants");
  const double s2 = p.sigma * p.sigma;
  const double t2s2 = 1.0 + p.theta * p.theta / s2;

  auto A = [&](double r) {
    if (r >= 2.0) return 2.0 * std::sqrt(kPi) / std::sqrt(2.0 * r - 1.0) * std::pow(t2s2, 0.5 * r);
    return 12.0 * gamma_fn(0.5 * r) * t2s2;
  };
  const double r = p.r;
  double A_r = A(r);
  double B_r = 6.0 + 2.0 * std::sqrt(2.0) / std::sqrt(r) +
               2.0 * std::sqrt(2.0 * kPi * (r + 1.0)) * std::abs(p.theta) / p.sigma *
                   std::pow(t2s2, 0.5 * (r - 1.0)) +
               2.0 * (std::sqrt(2.0 * r) + r) * A_r;
  double C1 = (1.0 / s2) * (2.0 / (r + 2.0) * A(r + 1.0)) *
              (1.0 + (2.0 + p.theta * p.theta / s2 * B_r));
  return {C1, 0.5 * C1, A_r, B_r};
}

std::string SteinSolution::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "x,f,f1,f2,residual\n";
  for (std::size_t i = 0; i < x.size(); ++i)
    os << x[i] << ',' << f[i] << ',' << f1[i] << ',' << f2[i] << ',' << pointwise_residual[i]
       << '\n';
  return os.str();
}

const std::vector<TestFunction>& h2_dictionary() {
  // Each entry is pre-scaled so that sup|h'| <= 1 and sup|h''| <= 1:
  //  - sin(ax) * s with s = 1/(a max(1,a))
  //  - tanh(ax) * s with s = min(1/a, 1/(0.7698 a^2))   (max|sech^2 u tanh u| = 2/(3 sqrt 3))
  //  - Gaussian bump exp(-(x-c)^2/(2 w^2)) * s with s = min(w sqrt(e), w^2)
  static const std::vector<TestFunction> dict = [] {
    std::vector<TestFunction> d;
    auto add_sin = [&](double a) {
      double s = 1.0 / (a * std::max(1.0, a));
      d.push_back({"sin_a" + std::to_string(a), [a, s](double x) { return s * std::sin(a * x); },
                   s * a, s * a * a});
    };
    auto add_tanh = [&](double a) {
      double s = std::min(1.0 / a, 1.0 / (2.0 / (3.0 * std::sqrt(3.0)) * 2.0 * a * a));
      d.push_back({"tanh_a" + std::to_string(a), [a, s](double x) { return s * std::tanh(a * x); },
                   s * a, s * 2.0 * a * a * 2.0 / (3.0 * std::sqrt(3.0))});
    };
    auto add_bump = [&](double c, double w) {
      double s = std::min(w * std::sqrt(std::exp(1.0)), w * w);
      d.push_back({"bump_c" + std::to_string(c), [c, w, s](double x) {
                     double u = (x - c) / w;
                     return s * std::exp(-0.5 * u * u);
                   },
                   s / (w * std::sqrt(std::exp(1.0))), s / (w * w)});
    };
    add_sin(0.5);
    add_sin(1.0);
    add_sin(2.0);
    add_tanh(0.5);
    add_tanh(1.0);
    add_tanh(2.0);
    add_bump(0.0, 1.0);
    add_bump(1.0, 1.0);
    add_bump(-1.0, 1.0);
    add_bump(0.0, 2.0);
    return d;
  }();
  return dict;
}

std::function<double(double)> named_test_function(const std::string& name) {
  if (name == "x") return [](double x) { return x; };
  if (name == "x2") return [](double x) { return x * x; };
  if (name == "tanh") return [](double x) { return std::tanh(x); };
  if (name == "sin") return [](double x) { return std::sin(x); };
  if (name == "bump") return [](double x) { return std::exp(-0.5 * x * x); };
  if (name == "const") return [](double) { return 1.0; };
  throw std::invalid_argument("unknown test function '" + name + "'; available: x, x2, tanh, sin, bump, const");
}

std::vector<std::string> named_test_function_list() {
  return {"x", "x2", "tanh", "sin", "bump", "const"};
}

}  // namespace vgc
