#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "umbrella/foliation.hpp"
#include "umbrella/mapping.hpp"

namespace umbrella {

/// Counter-based generator: draw k of stream (seed, index) is a pure
/// function of (seed, index, k), so trials can run in any order.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double next_unit();
  double uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

struct ExperimentConfig {
  int ell = 3;
  MapForm form = MapForm::ellipse_circle;
  double a = 1.0;
  double b = 2.0;
  std::int64_t trials = 0;
  Box sampling_box{-2.0, -2.0, 2.0, 2.0};
  std::uint64_t seed = 0;
  double tol = 1e-8;
  int oracle_every = 0;  // run tangency_search on every k-th trial; 0 disables
  bool keep_records = false;
  int threads = 0;  // 0: UMBRELLA_THREADS or hardware concurrency

  void validate() const;
};

struct TrialRecord {
  std::int64_t index = 0;
  std::vector<Point2> centers;
  int point_count = 0;  // -1 when the solver reported an inconsistency
  std::vector<Point2> points;
  bool degenerate = false;
  bool non_isolated = false;
  bool crosscap = false;
  bool level_shape = false;  // levels positive: one ellipse and l-1 circles
  bool oracle_ran = false;
  bool oracle_agree = false;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::map<int, std::int64_t> histogram;  // singular points per trial -> count; -1: solver failure
  std::int64_t crosscap_pass = 0;
  std::int64_t level_shape_pass = 0;
  std::int64_t oracle_runs = 0;
  std::int64_t oracle_agree = 0;
  std::int64_t degenerate_trials = 0;
  std::int64_t clean_trials = 0;
  // Clean trials matching the generic prediction: one cross-cap point for a
  // full-rank l = 3 matrix, no singular points otherwise.
  std::int64_t clean_expected = 0;
  std::int64_t solver_failures = 0;
  std::vector<TrialRecord> records;
};

/// Expected number of singular points for a generic central point.
int generic_point_count(const ExperimentConfig& cfg);

/// Sorted point sets match one-to-one within tol.
bool point_sets_match(const std::vector<Point2>& a, const std::vector<Point2>& b, double tol);

TrialRecord run_trial(const ExperimentConfig& cfg, std::int64_t index);

ExperimentReport run_genericity_experiment(const ExperimentConfig& cfg);

/// Worker count from UMBRELLA_THREADS, capped by hardware concurrency.
int thread_count(int requested);

}  // namespace umbrella
