// Command-line front end: analyze, classify, oracle, experiment, figure.
// Exit codes: 0 success, 2 invalid input, 3 solver inconsistency.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "umbrella/classify.hpp"
#include "umbrella/experiment.hpp"
#include "umbrella/figure.hpp"
#include "umbrella/foliation.hpp"
#include "umbrella/json_io.hpp"
#include "umbrella/singular_locus.hpp"

namespace {

using namespace umbrella;

constexpr int kExitInvalid = 2;
constexpr int kExitSolver = 3;

std::vector<double> parse_numbers(const std::string& text, std::size_t expected, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidInput, std::string("bad number in ") + what + ": '" + item + "'");
    }
  }
  if (out.size() != expected) {
    throw Error(ErrorCode::InvalidInput,
                std::string(what) + " needs " + std::to_string(expected) + " comma-separated numbers");
  }
  return out;
}

Box parse_box(const std::string& text) {
  const auto v = parse_numbers(text, 4, "--box");
  Box b{v[0], v[1], v[2], v[3]};
  if (!b.valid()) throw Error(ErrorCode::InvalidInput, "--box must satisfy x0 < x1 and y0 < y1");
  return b;
}

GDSMapping load_mapping(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot read mapping spec " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidInput, "mapping spec " + path + " is not valid JSON: " + e.what());
  }
  return mapping_from_json(j);
}

void print(const json& j) { std::cout << j.dump(2) << "\n"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Singular loci of generalized distance-squared mappings of the plane"};
  app.require_subcommand(1);

  std::string map_path;
  double tol = 1e-8;

  auto* analyze = app.add_subcommand("analyze", "Singular-point report (l >= 3) or singular curve (l = 2)");
  analyze->add_option("--map", map_path, "Mapping spec JSON")->required();
  analyze->add_option("--tol", tol, "Residual tolerance on normalised minors");

  auto* classify = app.add_subcommand("classify", "Class report: whitney_umbrella, immersion or unresolved");
  classify->add_option("--map", map_path, "Mapping spec JSON")->required();
  classify->add_option("--tol", tol, "Residual tolerance on normalised minors");

  std::string box_text;
  int grid = kDefaultGrid;
  double tangency_tol = kDefaultTangencyTol;
  auto* oracle = app.add_subcommand("oracle", "Tangency search over the level-curve foliations");
  oracle->add_option("--map", map_path, "Mapping spec JSON")->required();
  oracle->add_option("--box", box_text, "Search box x0,y0,x1,y1 (default: inflated centre box)");
  oracle->add_option("--grid", grid, "Grid points per side");
  oracle->add_option("--tol", tangency_tol, "Tolerance on normalised cross products");
  bool nested = false;
  oracle->add_flag("--nested", nested, "Also search the box scaled by 10, 100 and 1000");

  ExperimentConfig cfg;
  std::string form_text = "ellipse_circle";
  auto* experiment = app.add_subcommand("experiment", "Seeded Monte Carlo genericity experiment");
  experiment->add_option("--ell", cfg.ell, "Target dimension l >= 3")->required();
  experiment->add_option("--a", cfg.a, "Ellipse weight a");
  experiment->add_option("--b", cfg.b, "Ellipse weight b");
  experiment->add_option("--trials", cfg.trials, "Number of trials")->required();
  experiment->add_option("--seed", cfg.seed, "64-bit seed")->required();
  experiment->add_option("--box", box_text, "Sampling box x0,y0,x1,y1 (default -2,-2,2,2)");
  experiment->add_option("--form", form_text, "ellipse_circle | distance_squared | lorentzian");
  experiment->add_option("--tol", cfg.tol, "Solver residual tolerance");
  experiment->add_option("--oracle-every", cfg.oracle_every, "Run the tangency oracle every k-th trial");
  experiment->add_flag("--records", cfg.keep_records, "Include per-trial records");
  experiment->add_option("--threads", cfg.threads, "Worker threads (default: UMBRELLA_THREADS or all cores)");

  std::string probe_text;
  std::string out_path;
  auto* figure = app.add_subcommand("figure", "Render level curves and tangency points as SVG");
  figure->add_option("--map", map_path, "Mapping spec JSON")->required();
  figure->add_option("--probe", probe_text, "Probe point x,y for mappings without singular points");
  figure->add_option("--out", out_path, "Output SVG path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }

  try {
    if (*analyze) {
      const GDSMapping m = load_mapping(map_path);
      if (m.ell() == 2) {
        const SingularCurve curve = singular_curve(m);
        print({{"curve", conic_to_json(curve.conic)}, {"kind", std::string(to_string(curve.kind))}});
      } else {
        print(singular_report_json(solve_singular_points(m, tol)));
      }
    } else if (*classify) {
      const MapClass c = classify_map(load_mapping(map_path), tol);
      print(class_report_json(c));
    } else if (*oracle) {
      const GDSMapping m = load_mapping(map_path);
      const Box box = box_text.empty() ? default_search_box(m) : parse_box(box_text);
      print(oracle_report_json(nested ? tangency_search_nested(m, box, kNestedScales, grid, tangency_tol)
                                      : tangency_search(m, box, grid, tangency_tol)));
    } else if (*experiment) {
      cfg.form = map_form_from_string(form_text);
      if (!box_text.empty()) cfg.sampling_box = parse_box(box_text);
      print(experiment_report_json(run_genericity_experiment(cfg)));
    } else if (*figure) {
      const GDSMapping m = load_mapping(map_path);
      FigureInput input;
      if (!probe_text.empty()) {
        const auto v = parse_numbers(probe_text, 2, "--probe");
        input.probe = Point2{v[0], v[1]};
      }
      if (m.ell() >= 3) {
        for (const auto& rec : solve_singular_points(m).points) input.tangency_points.push_back(rec.location);
      }
      if (input.tangency_points.empty() && !input.probe) {
        throw Error(ErrorCode::InvalidInput, "mapping has no singular points to depict; pass --probe x,y");
      }
      render_figure(m, input, out_path);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (e.code() == ErrorCode::SolverInconsistency) return kExitSolver;
    return e.code() == ErrorCode::IoError ? 1 : kExitInvalid;
  }
  return 0;
}
