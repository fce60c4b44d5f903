#pragma once

#include "vgchaos/vg_distribution.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace vgc {

struct SteinGrid {
  enum class Spacing { uniform, graded };

  double x_min;
  double x_max;
  int n_points;
  Spacing spacing = Spacing::uniform;

  SteinGrid(double lo, double hi, int n, Spacing s = Spacing::uniform);

  /// Node coordinates (strictly increasing; a node falling exactly on 0 is
  /// nudged to 1e-8 to keep the integral representation evaluable).
  std::vector<double> nodes() const;
};

/// Grid-sampled solution of the VG Stein equation
///   sigma^2 (x + r theta) f'' + (sigma^2 r + 2 theta (x + r theta)) f' - x f = h(x) - E[h(Y)]
struct SteinSolution {
  SteinGrid grid;
  std::vector<double> x;
  std::vector<double> f;
  std::vector<double> f1;
  std::vector<double> f2;
  std::vector<double> pointwise_residual;
  double residual_max = 0.0;
  double h_mean = 0.0;  // E[h(Y)] used for the centered right-hand side

  std::string to_csv() const;
};

/// Explicit Malliavin-Stein constants for the VG target.
struct MsConstants {
  double C1;
  double C2;  // = C1 / 2 exactly
  double A_r;
  double B_r;
};

/// Solves the Stein equation by adaptive quadrature of the two-sided integral
/// representation, then fills derivatives by finite differences and the
/// pointwise residual against the ODE.
SteinSolution solve(const VgParams& p, const std::function<double(double)>& h,
                    const SteinGrid& grid);

/// Recomputes the max interior residual of a (possibly modified) solution,
/// independently of solve's internal bookkeeping.
double residual(const SteinSolution& sol, const VgParams& p,
                const std::function<double(double)>& h);

MsConstants ms_constants(const VgParams& p);

/// The built-in test-function dictionary used by the CLI and the d_H2 lower
/// bound: names -> functions certified (analytically) to have the derivative
/// bounds recorded in the docs.
struct TestFunction {
  std::string name;
  std::function<double(double)> fn;
  double d1_bound;  // sup |h'|
  double d2_bound;  // sup |h''|
};

const std::vector<TestFunction>& h2_dictionary();

/// Lookup for the CLI dictionary {x, x2, tanh, sin, bump, const}.
std::function<double(double)> named_test_function(const std::string& name);
std::vector<std::string> named_test_function_list();

}  // namespace vgc
