#include "umbrella/json_io.hpp"

#include <cmath>

namespace umbrella {

namespace {

json point_json(Point2 p) { return json::array({p.x1, p.x2}); }

Point2 point_from(const json& j) {
  if (!j.is_array() || j.size() != 2) throw Error(ErrorCode::InvalidInput, "point must be [x1, x2]");
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

json points_json(const std::vector<Point2>& pts) {
  json arr = json::array();
  for (Point2 p : pts) arr.push_back(point_json(p));
  return arr;
}

json box_json(const Box& b) { return json::array({b.x0, b.y0, b.x1, b.y1}); }

}  // namespace

GDSMapping mapping_from_json(const json& j) {
  try {
    if (!j.is_object()) throw Error(ErrorCode::InvalidInput, "mapping spec must be a JSON object");
    if (!j.contains("p")) throw Error(ErrorCode::InvalidInput, "mapping spec needs \"p\"");
    std::vector<Point2> centers;
    for (const json& pj : j.at("p")) centers.push_back(point_from(pj));
    if (j.contains("ell") && j.at("ell").get<std::size_t>() != centers.size()) {
      throw Error(ErrorCode::DimensionMismatch, "\"ell\" does not match the number of centres");
    }
    std::vector<Row2> rows;
    if (j.contains("A")) {
      for (const json& rj : j.at("A")) {
        if (!rj.is_array() || rj.size() != 2) throw Error(ErrorCode::DimensionMismatch, "rows of A need 2 entries");
        rows.push_back({rj.at(0).get<double>(), rj.at(1).get<double>()});
      }
    }
    const MapForm form = map_form_from_string(j.value("form", std::string("general")));

    if (form == MapForm::general) {
      if (!j.contains("A")) throw Error(ErrorCode::InvalidInput, "general form needs \"A\"");
      return make_mapping(std::move(rows), std::move(centers));
    }
    std::optional<EllipseCircleParams> params;
    if (form == MapForm::ellipse_circle) {
      if (!j.contains("a") || !j.contains("b")) {
        throw Error(ErrorCode::InvalidParams, "ellipse_circle form needs \"a\" and \"b\"");
      }
      params = EllipseCircleParams{j.at("a").get<double>(), j.at("b").get<double>()};
    }
    GDSMapping m = make_special(form, std::move(centers), params);
    if (j.contains("A")) {
      if (rows.size() != m.ell()) throw Error(ErrorCode::DimensionMismatch, "\"A\" row count does not match \"p\"");
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i] != m.row(i)) {
          throw Error(ErrorCode::InvalidInput, "\"A\" is inconsistent with form " + std::string(to_string(form)));
        }
      }
    }
    return m;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("malformed mapping spec: ") + e.what());
  }
}

json mapping_to_json(const GDSMapping& m) {
  json j;
  j["ell"] = m.ell();
  json rows = json::array();
  for (const Row2& r : m.coefficients().rows()) rows.push_back(json::array({r[0], r[1]}));
  j["A"] = rows;
  json centers = json::array();
  for (const Point2& p : m.centers()) centers.push_back(point_json(p));
  j["p"] = centers;
  j["form"] = std::string(to_string(m.form()));
  if (const auto& ab = m.ellipse_circle_params()) {
    j["a"] = ab->a;
    j["b"] = ab->b;
  }
  return j;
}

json conic_to_json(const Conic& c) {
  return {{"c20", c.c20}, {"c11", c.c11}, {"c02", c.c02}, {"c10", c.c10}, {"c01", c.c01}, {"c00", c.c00}};
}

Conic conic_from_json(const json& j) {
  try {
    return {j.at("c20").get<double>(), j.at("c11").get<double>(), j.at("c02").get<double>(),
            j.at("c10").get<double>(), j.at("c01").get<double>(), j.at("c00").get<double>()};
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("malformed conic: ") + e.what());
  }
}

json singular_report_json(const SingularLocus& locus) {
  json arr = json::array();
  for (const SingularPointRecord& r : locus.points) {
    arr.push_back({{"x1", r.location.x1},
                   {"x2", r.location.x2},
                   {"rank", r.jacobian_rank},
                   {"kernel", point_json(r.kernel)},
                   {"residual", r.max_minor_residual},
                   {"degenerate", r.degenerate},
                   {"levels", r.levels}});
  }
  return arr;
}

json class_report_json(const MapClass& c) {
  json j;
  j["class"] = std::string(to_string(c.kind));
  if (c.point) j["point"] = point_json(*c.point);
  if (c.det) j["det"] = *c.det;
  if (!c.reason.empty()) j["reason"] = c.reason;
  return j;
}

json oracle_report_json(const TangencyReport& r) {
  return {{"tangency_points", points_json(r.points)},
          {"excluded_regions", r.excluded_regions},
          {"objective_at_points", r.objective},
          {"excluded_points", points_json(r.excluded_points)}};
}

json degeneracy_report_json(const DegeneracyReport& r) {
  json pairs = json::array();
  for (const auto& [i, k] : r.coincident_centers) pairs.push_back(json::array({i, k}));
  json flags = json::array();
  for (bool b : r.sigma_flags) flags.push_back(b);
  return {{"sigma_flags", flags}, {"coincident_centers", pairs}, {"rank_deficient_A", r.rank_deficient_A}};
}

json experiment_report_json(const ExperimentReport& r) {
  const ExperimentConfig& c = r.config;
  json cfg = {{"ell", c.ell},
              {"form", std::string(to_string(c.form))},
              {"trials", c.trials},
              {"box", box_json(c.sampling_box)},
              {"seed", c.seed},
              {"tol", c.tol},
              {"oracle_every", c.oracle_every}};
  if (c.form == MapForm::ellipse_circle) {
    cfg["a"] = c.a;
    cfg["b"] = c.b;
  }
  json hist = json::object();
  for (const auto& [count, freq] : r.histogram) hist[std::to_string(count)] = freq;
  json j = {{"config", cfg},
            {"seed", c.seed},
            {"histogram", hist},
            {"crosscap_pass", r.crosscap_pass},
            {"level_shape_pass", r.level_shape_pass},
            {"oracle_runs", r.oracle_runs},
            {"oracle_agree", r.oracle_agree},
            {"degenerate_trials", r.degenerate_trials},
            {"clean_trials", r.clean_trials},
            {"clean_expected", r.clean_expected},
            {"solver_failures", r.solver_failures}};
  if (c.keep_records) {
    json recs = json::array();
    for (const TrialRecord& t : r.records) {
      recs.push_back({{"index", t.index},
                      {"centers", points_json(t.centers)},
                      {"point_count", t.point_count},
                      {"points", points_json(t.points)},
                      {"degenerate", t.degenerate},
                      {"crosscap", t.crosscap},
                      {"level_shape", t.level_shape},
                      {"oracle_ran", t.oracle_ran},
                      {"oracle_agree", t.oracle_agree}});
    }
    j["records"] = recs;
  }
  return j;
}

}  // namespace umbrella
