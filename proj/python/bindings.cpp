// Python bindings. Mapping specs and reports cross the boundary as the same
// JSON documents the command-line tool reads and writes.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "umbrella/figure.hpp"
#include "umbrella/json_io.hpp"

namespace py = pybind11;
using namespace umbrella;

namespace {

json to_json(const py::handle& obj) {
  const py::module_ pyjson = py::module_::import("json");
  return json::parse(pyjson.attr("dumps")(obj).cast<std::string>());
}

py::object to_python(const json& j) {
  const py::module_ pyjson = py::module_::import("json");
  return pyjson.attr("loads")(j.dump());
}

GDSMapping load(const py::handle& spec) { return mapping_from_json(to_json(spec)); }

Box to_box(const std::vector<double>& v) {
  if (v.size() != 4) throw Error(ErrorCode::InvalidInput, "box needs four numbers x0, y0, x1, y1");
  return {v[0], v[1], v[2], v[3]};
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "Singularities of generalized distance-squared mappings of the plane";

  // Messages start with the error code name, e.g. "ZeroEntry: ...".
  py::register_exception<Error>(mod, "UmbrellaError", PyExc_ValueError);

  mod.def(
      "evaluate", [](const py::dict& spec, std::pair<double, double> x) { return evaluate(load(spec), {x.first, x.second}); },
      py::arg("spec"), py::arg("x"));
  mod.def(
      "jacobian",
      [](const py::dict& spec, std::pair<double, double> x) {
        const JacobianMatrix j = jacobian(load(spec), {x.first, x.second});
        std::vector<std::vector<double>> rows;
        for (const Row2& r : j.rows) rows.push_back({r[0], r[1]});
        return rows;
      },
      py::arg("spec"), py::arg("x"));
  mod.def(
      "analyze",
      [](const py::dict& spec, double tol) {
        const GDSMapping m = load(spec);
        if (m.ell() == 2) {
          const SingularCurve c = singular_curve(m);
          return to_python({{"curve", conic_to_json(c.conic)}, {"kind", std::string(to_string(c.kind))}});
        }
        return to_python(singular_report_json(solve_singular_points(m, tol)));
      },
      py::arg("spec"), py::arg("tol") = 1e-8);
  mod.def(
      "classify", [](const py::dict& spec, double tol) { return to_python(class_report_json(classify_map(load(spec), tol))); },
      py::arg("spec"), py::arg("tol") = 1e-8);
  mod.def(
      "oracle",
      [](const py::dict& spec, std::optional<std::vector<double>> box, int grid, double tol, bool nested) {
        const GDSMapping m = load(spec);
        const Box b = box ? to_box(*box) : default_search_box(m);
        const TangencyReport r =
            nested ? tangency_search_nested(m, b, kNestedScales, grid, tol) : tangency_search(m, b, grid, tol);
        return to_python(oracle_report_json(r));
      },
      py::arg("spec"), py::arg("box") = py::none(), py::arg("grid") = kDefaultGrid,
      py::arg("tol") = kDefaultTangencyTol, py::arg("nested") = false);
  mod.def(
      "degeneracy", [](const py::dict& spec) { return to_python(degeneracy_report_json(detect_degeneracy(load(spec)))); },
      py::arg("spec"));
  mod.def(
      "experiment",
      [](int ell, double a, double b, std::int64_t trials, std::uint64_t seed, std::optional<std::vector<double>> box,
         const std::string& form, double tol, int oracle_every, bool records, int threads) {
        ExperimentConfig cfg;
        cfg.ell = ell;
        cfg.a = a;
        cfg.b = b;
        cfg.trials = trials;
        cfg.seed = seed;
        if (box) cfg.sampling_box = to_box(*box);
        cfg.form = map_form_from_string(form);
        cfg.tol = tol;
        cfg.oracle_every = oracle_every;
        cfg.keep_records = records;
        cfg.threads = threads;
        ExperimentReport report;
        {
          py::gil_scoped_release release;
          report = run_genericity_experiment(cfg);
        }
        return to_python(experiment_report_json(report));
      },
      py::arg("ell"), py::arg("a") = 1.0, py::arg("b") = 2.0, py::arg("trials") = 100, py::arg("seed") = 0,
      py::arg("box") = py::none(), py::arg("form") = "ellipse_circle", py::arg("tol") = 1e-8,
      py::arg("oracle_every") = 0, py::arg("records") = false, py::arg("threads") = 0);
  mod.def(
      "figure",
      [](const py::dict& spec, std::optional<std::pair<double, double>> probe) {
        const GDSMapping m = load(spec);
        FigureInput input;
        if (probe) input.probe = Point2{probe->first, probe->second};
        if (m.ell() >= 3) {
          for (const auto& rec : solve_singular_points(m).points) input.tangency_points.push_back(rec.location);
        }
        return render_svg(m, input);
      },
      py::arg("spec"), py::arg("probe") = py::none());
}
