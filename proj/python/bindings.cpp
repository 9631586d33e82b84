#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qlg/divisors.hpp"
#include "qlg/drivers.hpp"
#include "qlg/lattice.hpp"
#include "qlg/resonance.hpp"

namespace py = pybind11;
using namespace qlg;

PYBIND11_MODULE(_qlg, m) {
  m.doc() = "Lattice, small-divisor and resonance utilities";
  m.attr("__version__") = QLG_VERSION;

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def("split_momentum", [](const RVec& k) {
    const MomentumSplit s = split_momentum(k);
    return py::make_tuple(s.kappa(), s.eta);
  }, py::arg("k"), "Split k into (kappa on the half-integer lattice, eta in [-1/4, 1/4)).");

  m.def("phi_st", &phi_st, py::arg("a"), py::arg("b"), py::arg("s"), py::arg("t"));

  py::class_<DivisorConfig>(m, "DivisorConfig")
      .def(py::init<>())
      .def_readwrite("delta", &DivisorConfig::delta)
      .def_readwrite("n_radius", &DivisorConfig::n_radius)
      .def_readwrite("dim", &DivisorConfig::dim)
      .def_readwrite("gamma", &DivisorConfig::gamma);

  m.def("c_delta", [](const RVec& eta, const DivisorConfig& cfg) {
    return c_delta(eta, cfg).c_delta_value;
  }, py::arg("eta"), py::arg("cfg") = DivisorConfig{});
  m.def("in_A_eta", [](const RVec& eta, const DivisorConfig& cfg) {
    return in_A_eta(eta, cfg).member;
  }, py::arg("eta"), py::arg("cfg") = DivisorConfig{});

  m.def("resonance_lines", [](int n_radius, double box) {
    py::list out;
    for (const auto& s : resonance_lines(n_radius, box))
      out.append(py::make_tuple(s.n, s.x1, s.y1, s.x2, s.y2));
    return out;
  }, py::arg("n_radius"), py::arg("box"), "Segments (n, x1, y1, x2, y2) of the lines n.k = |n|^2.");

  m.def("delta_kernel", &delta_kernel, py::arg("c"), py::arg("tau"), py::arg("eps"));
  m.def("delta_kernel_mass", &delta_kernel_mass, py::arg("tau"), py::arg("eps"), py::arg("C") = 1.0);

  m.def("single_mode_ratio", [](double rho, const RVec& eps_list, bool control, double tau) {
    return single_mode_scenario(rho, eps_list, control, tau).ratio;
  }, py::arg("rho"), py::arg("eps_list"), py::arg("control") = false, py::arg("tau") = 0.5);
}
