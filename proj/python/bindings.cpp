#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qlve/cli.hpp"
#include "qlve/lve.hpp"
#include "qlve/model.hpp"
#include "qlve/resum.hpp"

namespace py = pybind11;
using namespace qlve;

PYBIND11_MODULE(_qlve, m) {
  m.doc() = "Quartic O(N) vector model: tree expansion, oracles and resummation";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<CapError>(m, "CapError", PyExc_ValueError);

  py::class_<SurfacePoint>(m, "SurfacePoint")
      .def(py::init<double, double>(), py::arg("modulus"), py::arg("lifted_arg"))
      .def_readonly("modulus", &SurfacePoint::modulus)
      .def_readonly("lifted_arg", &SurfacePoint::liftedArg);
  py::class_<EpsParam>(m, "EpsParam")
      .def(py::init<double, double>(), py::arg("modulus"), py::arg("arg"))
      .def_readonly("modulus", &EpsParam::modulus)
      .def_readonly("arg", &EpsParam::arg)
      .def("value", &EpsParam::value);

  m.def("lift_sqrt", &lift_sqrt);
  m.def("resolvent", &resolvent);
  m.def("max_radius", &max_radius, py::arg("phi"), py::arg("theta"));
  m.def("convergence_ratio", &convergence_ratio);
  m.def("rho_xi", [](double xi, double phi) { return rho_xi(xi, phi); });
  m.def("cardioid_contains", [](const SurfacePoint& g, const EpsParam& e, double alpha) {
    auto r = cardioid_contains(g, e, alpha);
    return py::make_tuple(r.inCardioid, r.psiUsed, r.margin);
  });

  m.def("ciliated_sum", [](int n, int k) { return to_double(ciliated_sum(n, k)); });
  m.def("tree_coefficient", [](int n, int k, int q) {
    auto r = tree_coefficient(n, k, q);
    return py::make_tuple(numerator(r).str(), denominator(r).str());
  });

  m.def(
      "partition",
      [](const SurfacePoint& g, const EpsParam& e, double psi, double t) {
        auto r = partition(ModelPoint(g, e, psi, t));
        return py::make_tuple(r.value, r.error);
      },
      py::arg("g"), py::arg("eps"), py::arg("psi"), py::arg("t") = 0.0);
  m.def("cumulant_oracle", [](const SurfacePoint& g, const EpsParam& e, double psi, int k) {
    auto r = cumulant_oracle(g, e, psi, k);
    return py::make_tuple(r.value, r.error);
  });
  m.def("radial_oracle", [](int N, cplx g, int k) {
    auto r = radial_oracle(N, g, k);
    return py::make_tuple(r.value, r.error);
  });
  m.def(
      "lve_cumulant",
      [](const SurfacePoint& g, const EpsParam& e, double psi, int k, int nMax, std::uint64_t seed, int threads) {
        LveScheme s;
        s.seed = seed;
        s.threads = threads;
        auto r = lve_cumulant(g, e, psi, k, nMax, 1e-6, s);
        return py::make_tuple(r.value, r.error, r.tailBound);
      },
      py::arg("g"), py::arg("eps"), py::arg("psi"), py::arg("k"), py::arg("n_max"),
      py::arg("seed") = 20240611ULL, py::arg("threads") = 0);
  m.def("eps_coefficients", [](const SurfacePoint& g, double psi, int k, int qMax, int nMax) {
    return eps_coefficients(g, psi, k, qMax, nMax).coefficients;
  });
  m.def("borel_transform", py::overload_cast<const std::vector<cplx>&>(&borel_transform));
  m.def(
      "borel_laplace",
      [](const std::vector<cplx>& b, int L, int M, cplx eps) {
        auto r = pade(b, L, M);
        return py::make_tuple(laplace_reconstruct(r, eps), r.poles);
      },
      py::arg("b"), py::arg("L"), py::arg("M"), py::arg("eps"));

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
  });
}
