#include "umbrella/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>

#include "umbrella/classify.hpp"
#include "umbrella/singular_locus.hpp"

namespace umbrella {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(splitmix64(splitmix64(seed) ^ (stream * 0xD1B54A32D192ED03ULL))) {}

std::uint64_t CounterRng::next_u64() { return splitmix64(key_ + 0x9E3779B97F4A7C15ULL * counter_++); }

double CounterRng::next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

void ExperimentConfig::validate() const {
  if (ell < 3) throw Error(ErrorCode::InvalidParams, "experiment needs ell >= 3");
  if (form == MapForm::general) {
    throw Error(ErrorCode::InvalidParams, "experiment needs a special form (coefficients are fixed per run)");
  }
  if (form == MapForm::ellipse_circle && !(0.0 < a && a < b && std::isfinite(b))) {
    throw Error(ErrorCode::InvalidParams, "ellipse_circle requires 0 < a < b");
  }
  if (trials < 0) throw Error(ErrorCode::InvalidParams, "trials must be non-negative");
  if (!sampling_box.valid()) throw Error(ErrorCode::InvalidParams, "sampling box is degenerate");
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidParams, "tolerance must be positive");
  if (oracle_every < 0) throw Error(ErrorCode::InvalidParams, "oracle_every must be non-negative");
}

int generic_point_count(const ExperimentConfig& cfg) {
  return cfg.ell == 3 && cfg.form == MapForm::ellipse_circle ? 1 : 0;
}

bool point_sets_match(const std::vector<Point2>& a, const std::vector<Point2>& b, double tol) {
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  for (const Point2& p : a) {
    bool matched = false;
    for (std::size_t k = 0; k < b.size() && !matched; ++k) {
      if (!used[k] && distance(p, b[k]) < tol) {
        used[k] = true;
        matched = true;
      }
    }
    if (!matched) return false;
  }
  return true;
}

namespace {

GDSMapping trial_mapping(const ExperimentConfig& cfg, std::vector<Point2> centers) {
  if (cfg.form == MapForm::ellipse_circle) {
    return make_special(cfg.form, std::move(centers), EllipseCircleParams{cfg.a, cfg.b});
  }
  return make_special(cfg.form, std::move(centers));
}

bool level_shape_holds(const GDSMapping& m, Point2 q) {
  const auto levels = levels_through_point(m, q);
  int ellipses = 0;
  int circles = 0;
  for (const FoliationLevel& lv : levels) {
    if (!(lv.level > 1e-8)) return false;
    if (lv.kind == ConicKind::ellipse) ++ellipses;
    if (lv.kind == ConicKind::circle) ++circles;
  }
  return ellipses == 1 && circles == static_cast<int>(m.ell()) - 1;
}

}  // namespace

TrialRecord run_trial(const ExperimentConfig& cfg, std::int64_t index) {
  TrialRecord rec;
  rec.index = index;
  CounterRng rng(cfg.seed, static_cast<std::uint64_t>(index));
  const Box& box = cfg.sampling_box;
  for (int i = 0; i < cfg.ell; ++i) {
    const double x = rng.uniform(box.x0, box.x1);
    const double y = rng.uniform(box.y0, box.y1);
    rec.centers.push_back({x, y});
  }
  const GDSMapping m = trial_mapping(cfg, rec.centers);
  rec.degenerate = !detect_degeneracy(m).central_point_clean();

  SingularLocus locus;
  try {
    locus = solve_singular_points(m, cfg.tol);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SolverInconsistency) throw;
    rec.point_count = -1;
    return rec;
  }
  rec.non_isolated = locus.non_isolated;
  for (const auto& p : locus.points) rec.points.push_back(p.location);
  rec.point_count = static_cast<int>(rec.points.size());

  if (cfg.ell == 3 && rec.points.size() == 1) {
    try {
      rec.crosscap = crosscap_test(m, rec.points.front()).is_crosscap;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotRankOne) throw;
    }
  }
  if (cfg.form == MapForm::ellipse_circle) {
    rec.level_shape = std::all_of(rec.points.begin(), rec.points.end(),
                             [&](Point2 q) { return level_shape_holds(m, q); });
  }
  if (cfg.oracle_every > 0 && index % cfg.oracle_every == 0) {
    const Box search = scaled_box(default_search_box(m), kNestedScales[std::size(kNestedScales) - 1]);
    const TangencyReport oracle = tangency_search_nested(m, default_search_box(m));
    std::vector<Point2> inside;
    for (Point2 q : rec.points) {
      if (search.contains(q)) inside.push_back(q);
    }
    rec.oracle_ran = true;
    rec.oracle_agree = point_sets_match(inside, oracle.points, 1e-5);
  }
  return rec;
}

int thread_count(int requested) {
  if (requested > 0) return requested;
  int n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("UMBRELLA_THREADS")) {
    try {
      const int cap = std::stoi(env);
      if (cap > 0) n = std::min(n, cap);
    } catch (const std::exception&) {
      // ignore malformed values
    }
  }
  return n;
}

ExperimentReport run_genericity_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentReport report;
  report.config = cfg;

  std::vector<TrialRecord> trials(static_cast<std::size_t>(cfg.trials));
  std::atomic<std::int64_t> next{0};
  auto worker = [&] {
    for (std::int64_t i = next++; i < cfg.trials; i = next++) {
      TrialRecord& slot = trials[static_cast<std::size_t>(i)];
      try {
        slot = run_trial(cfg, i);
      } catch (const std::exception&) {
        slot = TrialRecord{};
        slot.index = i;
        slot.point_count = -1;
      }
    }
  };
  const int workers = static_cast<int>(std::min<std::int64_t>(thread_count(cfg.threads), cfg.trials));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
  }

  const int expected = generic_point_count(cfg);
  for (const TrialRecord& t : trials) {
    ++report.histogram[t.point_count];
    if (t.point_count < 0) ++report.solver_failures;
    if (t.crosscap) ++report.crosscap_pass;
    if (t.oracle_ran) {
      ++report.oracle_runs;
      if (t.oracle_agree) ++report.oracle_agree;
    }
    if (t.degenerate) {
      ++report.degenerate_trials;
      continue;
    }
    ++report.clean_trials;
    if (t.level_shape && t.point_count > 0) ++report.level_shape_pass;
    const bool ok = t.point_count == expected && !t.non_isolated && (expected == 0 || t.crosscap);
    if (ok) ++report.clean_expected;
  }
  if (cfg.keep_records) report.records = std::move(trials);
  return report;
}

}  // namespace umbrella
