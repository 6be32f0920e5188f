#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cohesive/commands.hpp"
#include "cohesive/config.hpp"
#include "cohesive/geodesic_oracle.hpp"
#include "cohesive/phase_field.hpp"
#include "cohesive/potentials.hpp"
#include "cohesive/profile_solver.hpp"

namespace py = pybind11;
using namespace cohesive;

PYBIND11_MODULE(pycohesive, m) {
  m.doc() = "Cohesive fracture surface densities and phase-field bars";

  py::class_<DamagePotential>(m, "Potential")
      .def_static("prototype", &DamagePotential::prototype, py::arg("ell") = 1.0)
      .def_static("dugdale", &DamagePotential::dugdale, py::arg("base"), py::arg("a"))
      .def_static("power_law", &DamagePotential::power_law, py::arg("p"), py::arg("kappa") = 1.0)
      .def_static("power_law_truncated", &DamagePotential::power_law_truncated, py::arg("p"),
                  py::arg("kappa"), py::arg("j"))
      .def_static("griffith", &DamagePotential::griffith, py::arg("ell"))
      .def_static("tabulated", &DamagePotential::tabulated, py::arg("s"), py::arg("f"))
      .def("f", &DamagePotential::f)
      .def("product", &DamagePotential::product)
      .def_property_readonly("ell", &DamagePotential::ell)
      .def_property_readonly("family", [](const DamagePotential& p) { return to_string(p.family()); })
      .def("__repr__", &DamagePotential::describe);

  m.def("eval_fk", &eval_fk, py::arg("pot"), py::arg("eps"), py::arg("s"));
  m.def("fk_breakpoint", &fk_breakpoint, py::arg("pot"), py::arg("eps"));
  m.def("eval_h", &eval_h, py::arg("ell"), py::arg("t"));

  py::class_<SolverOptions>(m, "SolverOptions")
      .def(py::init<>())
      .def_readwrite("max_iterations", &SolverOptions::max_iterations)
      .def_readwrite("energy_tol", &SolverOptions::energy_tol)
      .def_readwrite("nodes_per_unit", &SolverOptions::nodes_per_unit)
      .def_readwrite("max_T_steps", &SolverOptions::max_T_steps)
      .def_readwrite("table_tol", &SolverOptions::table_tol);

  py::class_<GhatResult>(m, "GhatResult")
      .def_readonly("value", &GhatResult::value)
      .def_readonly("T_values", &GhatResult::T_values)
      .def_readonly("energies", &GhatResult::energies)
      .def_property_readonly("ok", &GhatResult::ok)
      .def_property_readonly("alpha", [](const GhatResult& r) { return r.profile.alpha; })
      .def_property_readonly("beta", [](const GhatResult& r) { return r.profile.beta; });

  m.def("ghat", [](const DamagePotential& pot, double s, const SolverOptions& opts) {
    return ghat(pot, s, opts);
  }, py::arg("pot"), py::arg("s"), py::arg("opts") = SolverOptions{});
  m.def("g_eta", &g_eta, py::arg("pot"), py::arg("s"), py::arg("eta"),
        py::arg("opts") = SolverOptions{});

  m.def(
      "density_table",
      [](const DamagePotential& pot, const std::vector<double>& grid, const SolverOptions& opts) {
        const auto t = build_density_table(pot, grid, opts);
        return py::make_tuple(t.s, t.value);
      },
      py::arg("pot"), py::arg("grid"), py::arg("opts") = SolverOptions{},
      "Returns (s, g) lists; the grid must start at 0 and increase.");

  m.def(
      "geodesic_g",
      [](const DamagePotential& pot, double s, std::size_t n, int stencil, bool polish) {
        GeodesicGrid grid;
        grid.n_alpha = grid.n_beta = n;
        grid.stencil = stencil;
        const auto r = geodesic_g(pot, s, grid, polish);
        py::dict out;
        out["value"] = r.value;
        out["grid_value"] = r.grid_value;
        out["path"] = r.path;
        return out;
      },
      py::arg("pot"), py::arg("s"), py::arg("n") = 256, py::arg("stencil") = 16,
      py::arg("polish") = true);

  m.def(
      "minimize_bar",
      [](const DamagePotential& pot, double eps, double t) {
        const auto r = minimize_bar(pot, eps, t, AlternationOptions{});
        py::dict out;
        out["energy"] = r.energy;
        out["rounds"] = r.rounds;
        out["converged"] = r.converged;
        out["u"] = r.state.u;
        out["v"] = r.state.v;
        return out;
      },
      py::arg("pot"), py::arg("eps"), py::arg("t"));

  m.def(
      "run_command",
      [](const std::string& name, const std::string& config, const std::string& out_dir,
         int workers, bool svg) {
        std::istringstream in(config);
        const auto cfg = ExperimentConfig::parse(in, "<python>");
        RunOptions run;
        run.out_dir = out_dir;
        run.workers = workers;
        run.svg = svg;
        return run_command(name, cfg, run);
      },
      py::arg("name"), py::arg("config") = "", py::arg("out_dir") = ".", py::arg("workers") = 1,
      py::arg("svg") = false, "Runs one CLI command; returns its exit code.");

  py::register_exception<UnsupportedRegime>(m, "UnsupportedRegime", PyExc_ValueError);
}
