#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "zzsg/cli.hpp"

namespace py = pybind11;
using namespace zzsg;

namespace {

py::object to_py(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

BTSystem system_of(const std::string& orientation) {
  if (orientation == "minus") return minus_system();
  if (orientation == "plus") return plus_system();
  throw py::value_error("orientation must be 'minus' or 'plus'");
}

RunConfig config(const std::vector<std::string>& checks, int order, int audit_order, double bt_a, bool sabotage,
                 const std::string& golden, const std::string& csv) {
  RunConfig c;
  c.checks = checks;
  c.order = order;
  c.audit_order = audit_order;
  c.bt_a = bt_a;
  c.sabotage = sabotage;
  c.golden_dir = golden;
  c.csv_dir = csv;
  return c;
}

}  // namespace

PYBIND11_MODULE(zzsg, m) {
  m.doc() = "Z2xZ2-graded sine-Gordon verification engine";

  py::register_exception<Error>(m, "Error");

  m.def(
      "parse",
      [](const std::string& src, bool realize, int nz) {
        ParseOptions o;
        o.trunc.nz = nz;
        o.realize = realize;
        return parse_expr(src, o).str();
      },
      py::arg("expr"), py::arg("realize") = false, py::arg("nz") = 1, "canonical form of an expression");
  m.def(
      "describe", [](const std::string& src) { return describe(parse_expr(src)); }, py::arg("expr"));

  m.def("euler_lagrange", [] { return euler_lagrange(sine_gordon_lagrangian()).str(); });
  m.def(
      "component_equations",
      [](bool eliminate) {
        std::vector<std::tuple<std::string, std::string, std::string>> out;
        for (const auto& e : component_equations(eliminate))
          out.emplace_back(e.sector, GradedExpr::jet(e.leading).str(), e.residual.str());
        return out;
      },
      py::arg("eliminate_auxiliary") = true);
  m.def(
      "expand_series",
      [](const std::string& orientation, int N) {
        std::vector<std::string> out;
        for (const auto& c : expand_series(system_of(orientation), N)) out.push_back(c.str());
        return out;
      },
      py::arg("orientation") = "minus", py::arg("order") = 6);
  m.def(
      "body_relations",
      [](const std::string& orientation) {
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto& [j, rhs] : export_body_system(system_of(orientation)).relations)
          out.emplace_back(GradedExpr::jet(j).str(), rhs.str());
        return out;
      },
      py::arg("orientation") = "minus");

  m.def("checks", &all_checks);
  m.def(
      "run_check",
      [](const std::string& name, int order, int audit_order, double bt_a, bool sabotage) {
        RunConfig c = config({name}, order, audit_order, bt_a, sabotage, "", "");
        c.validate();
        return to_py(report_json(run_check(name, c)));
      },
      py::arg("name"), py::arg("order") = 6, py::arg("audit_order") = 4, py::arg("bt_a") = 1.0,
      py::arg("sabotage") = false, "one check as a schema-shaped dict");
  m.def(
      "run",
      [](const std::vector<std::string>& checks, const std::string& format, bool sabotage, const std::string& golden,
         const std::string& csv) {
        RunConfig c = config(checks, 6, 4, 1.0, sabotage, golden, csv);
        c.format = format;
        std::ostringstream out, err;
        int rc;
        {
          py::gil_scoped_release nogil;
          rc = run(c, out, err);
        }
        return std::make_tuple(rc, out.str(), err.str());
      },
      py::arg("checks") = std::vector<std::string>{}, py::arg("format") = "text", py::arg("sabotage") = false,
      py::arg("golden") = "", py::arg("csv") = "", "(exit code, stdout, stderr)");

  m.def("kink", &kink, py::arg("x"), py::arg("t") = 0.0, py::arg("v") = 0.0, py::arg("x0") = 0.0);
  m.def(
      "kink_energy",
      [](double v, double L, double h) { return energy(kink_state({L, h, h / 2}, 0, v, 0)); }, py::arg("v") = 0.0,
      py::arg("L") = 20.0, py::arg("h") = 1.0 / 128);
  m.def(
      "static_kink_residual",
      [](double h, double L, int stencil) {
        FieldState s = kink_state({L, h, h / 2}, 0, 0, 0);
        return classical_residual(s.X, std::vector<double>(s.size(), 0.0), h, stencil);
      },
      py::arg("h") = 1.0 / 512, py::arg("L") = 20.0, py::arg("stencil") = 4);
  m.def("graded_table", [] {
    std::vector<std::tuple<int, int, int, int>> out;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        auto [s, k] = GradedNumber::table(i, j);
        out.emplace_back(i, j, s, k);
      }
    return out;
  });
}
