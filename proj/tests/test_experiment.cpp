#include <doctest.h>

#include <numeric>
#include <set>

#include "support.hpp"
#include "umbrella/experiment.hpp"
#include "umbrella/json_io.hpp"

using namespace umbrella;

TEST_CASE("CounterRng streams are reproducible and distinct") {
  CounterRng a(42, 7), b(42, 7), c(42, 8), d(43, 7);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 100; ++i) {
    const auto va = a.next_u64();
    CHECK(va == b.next_u64());
    CHECK(va != c.next_u64());
    CHECK(va != d.next_u64());
    seen.insert(va);
  }
  CHECK(seen.size() == 100);
  CounterRng u(1, 1);
  for (int i = 0; i < 1000; ++i) {
    const double x = u.next_unit();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
}

TEST_CASE("zero trials give an empty report") {
  ExperimentConfig cfg;
  cfg.trials = 0;
  cfg.seed = 5;
  const ExperimentReport r = run_genericity_experiment(cfg);
  CHECK(r.histogram.empty());
  CHECK(r.crosscap_pass == 0);
  CHECK(r.oracle_agree == 0);
  CHECK(r.degenerate_trials == 0);
  CHECK(r.clean_trials == 0);
}

TEST_CASE("config validation") {
  ExperimentConfig cfg;
  cfg.trials = 1;
  cfg.ell = 2;
  CHECK_THROWS_AS(run_genericity_experiment(cfg), Error);
  cfg.ell = 3;
  cfg.a = 2;
  cfg.b = 1;
  CHECK_THROWS_AS(run_genericity_experiment(cfg), Error);
  cfg.a = 1;
  cfg.b = 2;
  cfg.sampling_box = {1, 1, 1, 2};
  CHECK_THROWS_AS(run_genericity_experiment(cfg), Error);
  cfg.sampling_box = {-2, -2, 2, 2};
  cfg.form = MapForm::general;
  CHECK_THROWS_AS(run_genericity_experiment(cfg), Error);
  cfg.form = MapForm::ellipse_circle;
  cfg.trials = -1;
  CHECK_THROWS_AS(run_genericity_experiment(cfg), Error);
}

TEST_CASE("histogram sums to the number of trials and the run is deterministic") {
  ExperimentConfig cfg;
  cfg.ell = 3;
  cfg.trials = 120;
  cfg.seed = 99;
  cfg.oracle_every = 10;
  cfg.keep_records = true;
  cfg.threads = 1;
  const ExperimentReport one = run_genericity_experiment(cfg);
  cfg.threads = 4;
  const ExperimentReport four = run_genericity_experiment(cfg);

  std::int64_t total = 0;
  for (const auto& [count, freq] : one.histogram) total += freq;
  CHECK(total == 120);
  CHECK(one.crosscap_pass <= cfg.trials);
  CHECK(one.oracle_runs == 12);
  CHECK(one.clean_trials + one.degenerate_trials == cfg.trials);
  CHECK(experiment_report_json(one).dump() == experiment_report_json(four).dump());

  cfg.seed = 100;
  CHECK(experiment_report_json(run_genericity_experiment(cfg)).dump() != experiment_report_json(one).dump());
}

TEST_CASE("trial sampling depends only on (seed, index)") {
  ExperimentConfig cfg;
  cfg.seed = 3;
  const TrialRecord a = run_trial(cfg, 17);
  const TrialRecord b = run_trial(cfg, 17);
  CHECK(a.centers == b.centers);
  CHECK(a.centers != run_trial(cfg, 18).centers);
  for (const Point2& p : a.centers) CHECK(cfg.sampling_box.contains(p));
}

TEST_CASE("point_sets_match") {
  CHECK(point_sets_match({}, {}, 1e-5));
  CHECK(point_sets_match({{0, 0}, {1, 1}}, {{1, 1 + 1e-7}, {0, 0}}, 1e-5));
  CHECK_FALSE(point_sets_match({{0, 0}}, {{0, 1e-3}}, 1e-5));
  CHECK_FALSE(point_sets_match({{0, 0}}, {{0, 0}, {1, 1}}, 1e-5));
  CHECK_FALSE(point_sets_match({{0, 0}, {0, 0}}, {{0, 0}, {1, 1}}, 1e-5));
}

TEST_CASE("degenerate trials are counted separately") {
  // A narrow horizontal sampling box makes all centres nearly collinear.
  ExperimentConfig cfg;
  cfg.trials = 30;
  cfg.seed = 1;
  cfg.sampling_box = {-2, 0, 2, 1e-12};
  const ExperimentReport r = run_genericity_experiment(cfg);
  CHECK(r.degenerate_trials == 30);
  CHECK(r.clean_trials == 0);
}
