#include "vgchaos/bounds.hpp"
#include "vgchaos/rosenblatt.hpp"
#include "vgchaos/second_chaos.hpp"
#include "vgchaos/stein.hpp"
#include "vgchaos/vg_distribution.hpp"

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace vgc;

PYBIND11_MODULE(_vgchaos, m) {
  m.doc() = "Variance-Gamma approximation on the second Wiener chaos";
  m.attr("__version__") = VGCHAOS_VERSION;

  py::class_<VgParams>(m, "VgParams")
      .def(py::init<double, double, double>(), py::arg("r"), py::arg("theta"), py::arg("sigma"))
      .def(py::init<double, double, double, double>(), py::arg("r"), py::arg("theta"),
           py::arg("sigma"), py::arg("mu"))
      .def_readonly("r", &VgParams::r)
      .def_readonly("theta", &VgParams::theta)
      .def_readonly("sigma", &VgParams::sigma)
      .def_readonly("mu", &VgParams::mu)
      .def("variance", &VgParams::variance)
      .def("mean", &VgParams::mean);

  m.def("density", &density, py::arg("params"), py::arg("x"));
  m.def("vg_cumulant", &vg_cumulant, py::arg("params"), py::arg("order"));
  m.def("cumulants_2_to_6", &cumulants_2_to_6, py::arg("params"));
  m.def("sample_vg", &sample, py::arg("params"), py::arg("n"), py::arg("seed"));
  m.def("vg_expect", &expect, py::arg("params"), py::arg("h"));
  m.def("gamma_lin_variance_vg", &gamma_lin_variance_vg, py::arg("params"), py::arg("ell"));

  py::class_<SecondChaosElement>(m, "SecondChaosElement")
      .def(py::init<std::vector<double>>(), py::arg("eigenvalues"))
      .def("eigenvalues", &SecondChaosElement::eigenvalues)
      .def("cumulant", &SecondChaosElement::cumulant, py::arg("order"))
      .def("sample", &SecondChaosElement::sample, py::arg("n"), py::arg("seed"))
      .def("rescaled_to_kappa2", &SecondChaosElement::rescaled_to_kappa2, py::arg("target"));

  m.def("m_statistic", [](const SecondChaosElement& F, const VgParams& p) {
    auto ms = m_statistic(F, p);
    return py::make_tuple(ms.M, ms.M_prime, ms.argmax_ell);
  }, py::arg("F"), py::arg("target"));
  m.def("gamma_lin_variance", &gamma_lin_variance, py::arg("F"), py::arg("ell"), py::arg("theta"),
        py::arg("sigma"));
  m.def("six_moment_bound", &six_moment_bound, py::arg("F"), py::arg("target"));
  m.def("clean_bound", &clean_bound, py::arg("F"), py::arg("target"));
  m.def("empirical_w1", &empirical_w1, py::arg("xs"), py::arg("ys"));
  m.def("bound_report_json",
        [](const SecondChaosElement& F, const VgParams& p, std::size_t n_mc, std::uint64_t seed) {
          return bound_report(F, p, n_mc, seed).to_json();
        },
        py::arg("F"), py::arg("target"), py::arg("n_mc"), py::arg("seed"));

  m.def("stein_solve",
        [](const VgParams& p, const std::string& h_name, double x_min, double x_max, int n) {
          auto sol = solve(p, named_test_function(h_name),
                           SteinGrid(x_min, x_max, n, SteinGrid::Spacing::uniform));
          py::dict d;
          d["x"] = sol.x;
          d["f"] = sol.f;
          d["residual_max"] = sol.residual_max;
          d["h_mean"] = sol.h_mean;
          return d;
        },
        py::arg("params"), py::arg("h"), py::arg("x_min") = -8.0, py::arg("x_max") = 8.0,
        py::arg("n") = 512);

  m.def("rosenblatt_spectrum",
        [](double g1, double g2, int n_nodes, int n_s_nodes) {
          rosenblatt::RosenblattSpec spec(g1, g2);
          spec.n_nodes = n_nodes;
          spec.n_s_nodes = n_s_nodes;
          return rosenblatt::spectrum(spec);
        },
        py::arg("gamma1"), py::arg("gamma2"), py::arg("n_nodes") = 800,
        py::arg("n_s_nodes") = 400);
  m.def("rosenblatt_trace_cumulant",
        [](double g1, double g2, int p, std::size_t n_mc, std::uint64_t seed) {
          rosenblatt::RosenblattSpec spec(g1, g2);
          auto est = rosenblatt::cumulant_trace_mc(spec, p, n_mc, seed);
          return py::make_tuple(est.value, est.se);
        },
        py::arg("gamma1"), py::arg("gamma2"), py::arg("order"), py::arg("n_mc"), py::arg("seed"));
  m.def("rosenblatt_target",
        [](const std::string& which, double rho) {
          return rosenblatt::target_vg(
              which == "a" ? rosenblatt::LimitCase::a : rosenblatt::LimitCase::b, rho);
        },
        py::arg("case"), py::arg("rho") = 0.5);
  m.def("case_b_gamma2", &rosenblatt::case_b_gamma2, py::arg("gamma1"), py::arg("rho"));
}
