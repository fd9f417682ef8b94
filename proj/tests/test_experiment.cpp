#include <doctest.h>

#include <cmath>
#include <map>

#include "triage/experiment.hpp"
#include "triage/folds.hpp"
#include "triage/model_io.hpp"

#include "support/testutil.hpp"

using triage::Dataset;
using triage::DeterministicRng;
using triage::EnsembleConfig;

namespace {

EnsembleConfig small_config() {
  EnsembleConfig cfg;
  cfg.deferral_params.n_trees = 10;  // keep the suite quick
  return cfg;
}

}  // namespace

TEST_CASE("evaluate_holdout agrees with metrics recomputed by hand") {
  DeterministicRng gen(60);
  const Dataset all = testutil::random_dataset(gen, 160, 3, 2);
  const triage::FoldPlan plan =
      triage::stratified_kfold(all, 4, DeterministicRng(60, 0), 0);
  const auto [train, test] = triage::split_by_fold(all, plan, 0);
  const auto e = triage::fit_ensemble(train, small_config());
  const triage::RunReport r = triage::evaluate_holdout(e, train, test);

  CHECK(r.train_rows == train.n_rows());
  CHECK(r.test_rows == test.n_rows());
  const auto check_part = [&](const Dataset& part, double base_acc,
                              double final_acc, double defer_rate) {
    size_t base_ok = 0, final_ok = 0, deferred = 0;
    for (size_t i = 0; i < part.n_rows(); ++i) {
      if (triage::predict_tree(e.base, part.row(i)) == part.label(i)) {
        ++base_ok;
      }
      const auto p = triage::predict_ensemble(e, part.row(i));
      if (p.label == part.label(i)) {
        ++final_ok;
      }
      if (p.route == triage::Route::Hard) {
        ++deferred;
      }
    }
    const auto n = static_cast<double>(part.n_rows());
    CHECK(base_acc == static_cast<double>(base_ok) / n);
    CHECK(final_acc == static_cast<double>(final_ok) / n);
    CHECK(defer_rate == static_cast<double>(deferred) / n);
  };
  check_part(train, r.base_train_accuracy, r.final_train_accuracy,
             r.deferral_train_rate);
  check_part(test, r.base_test_accuracy, r.final_test_accuracy,
             r.deferral_test_rate);
}

TEST_CASE("aggregate computes mean and sample standard deviation") {
  const triage::Aggregate a = triage::aggregate({1.0, 2.0, 3.0, 4.0});
  CHECK(a.mean == 2.5);
  CHECK(a.stddev == doctest::Approx(std::sqrt(5.0 / 3.0)).epsilon(1e-12));

  const triage::Aggregate single = triage::aggregate({7.5});
  CHECK(single.mean == 7.5);
  CHECK(single.stddev == 0.0);

  const triage::Aggregate flat = triage::aggregate({2.0, 2.0, 2.0});
  CHECK(flat.mean == 2.0);
  CHECK(flat.stddev == 0.0);

  CHECK_THROWS_AS(triage::aggregate({}), std::invalid_argument);
}

TEST_CASE("run_cv covers every repeat-fold pair exactly once") {
  DeterministicRng gen(61);
  const Dataset d = testutil::random_dataset(gen, 90, 3, 2);
  const int k = 3;
  const int repeats = 2;
  const triage::CvReport report = triage::run_cv(d, small_config(), k, repeats, 5);

  CHECK(report.k == k);
  CHECK(report.repeats == repeats);
  CHECK(report.seed == 5);
  REQUIRE(report.runs.size() == static_cast<size_t>(k * repeats));
  size_t i = 0;
  for (int r = 0; r < repeats; ++r) {
    for (int f = 0; f < k; ++f, ++i) {
      CHECK(report.runs[i].repeat == r);
      CHECK(report.runs[i].fold == f);
      CHECK(report.runs[i].train_rows + report.runs[i].test_rows == d.n_rows());
      // stratified folds of 90 rows over k=3 are exactly 30 rows each
      CHECK(report.runs[i].test_rows == 30);
    }
  }
}

TEST_CASE("run_cv aggregates are the plain statistics of the run list") {
  DeterministicRng gen(62);
  const Dataset d = testutil::random_dataset(gen, 60, 2, 2);
  const triage::CvReport report = triage::run_cv(d, small_config(), 3, 2, 9);

  const auto expect = [&](double RunReport_field(const triage::RunReport&),
                          const triage::Aggregate& got) {
    std::vector<double> values;
    for (const auto& run : report.runs) {
      values.push_back(RunReport_field(run));
    }
    const triage::Aggregate want = triage::aggregate(values);
    CHECK(got.mean == want.mean);
    CHECK(got.stddev == want.stddev);
  };
  expect([](const triage::RunReport& r) { return r.base_train_accuracy; },
         report.base_train);
  expect([](const triage::RunReport& r) { return r.base_test_accuracy; },
         report.base_test);
  expect([](const triage::RunReport& r) { return r.final_train_accuracy; },
         report.final_train);
  expect([](const triage::RunReport& r) { return r.final_test_accuracy; },
         report.final_test);
  expect([](const triage::RunReport& r) { return r.deferral_train_rate; },
         report.deferral_train);
  expect([](const triage::RunReport& r) { return r.deferral_test_rate; },
         report.deferral_test);
}

TEST_CASE("run_cv is deterministic in the seed and sensitive to it") {
  DeterministicRng gen(63);
  const Dataset d = testutil::random_dataset(gen, 60, 2, 2);
  const auto a = triage::run_cv(d, small_config(), 3, 2, 21);
  const auto b = triage::run_cv(d, small_config(), 3, 2, 21);
  const auto c = triage::run_cv(d, small_config(), 3, 2, 22);
  CHECK(triage::cv_report_to_json(a, "d") == triage::cv_report_to_json(b, "d"));
  CHECK(triage::cv_report_to_json(a, "d") != triage::cv_report_to_json(c, "d"));
}

TEST_CASE("run_cv run (r, f) matches the same split trained standalone") {
  DeterministicRng gen(64);
  const Dataset d = testutil::random_dataset(gen, 80, 2, 2);
  const EnsembleConfig cfg = small_config();
  const uint64_t seed = 17;
  const triage::CvReport report = triage::run_cv(d, cfg, 4, 2, seed);

  // rebuild repeat 1, fold 2 independently
  const int r = 1, f = 2;
  const triage::FoldPlan plan = triage::stratified_kfold(
      d, 4, DeterministicRng(seed, static_cast<uint64_t>(r)), r);
  const auto [train, test] = triage::split_by_fold(d, plan, f);
  EnsembleConfig run_cfg = cfg;
  run_cfg.seed = triage::mix_seed(
      seed, {static_cast<uint64_t>(r), static_cast<uint64_t>(f)});
  const auto e = triage::fit_ensemble(train, run_cfg);
  const triage::RunReport want = triage::evaluate_holdout(e, train, test);

  const triage::RunReport& got = report.runs[static_cast<size_t>(r * 4 + f)];
  CHECK(got.base_test_accuracy == want.base_test_accuracy);
  CHECK(got.final_test_accuracy == want.final_test_accuracy);
  CHECK(got.deferral_test_rate == want.deferral_test_rate);
  CHECK(got.base_train_accuracy == want.base_train_accuracy);
  CHECK(got.final_train_accuracy == want.final_train_accuracy);
  CHECK(got.deferral_train_rate == want.deferral_train_rate);
}

TEST_CASE("run_cv rejects bad shapes") {
  DeterministicRng gen(65);
  const Dataset d = testutil::random_dataset(gen, 30, 2, 2);
  CHECK_THROWS_AS(triage::run_cv(d, small_config(), 1, 1, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(triage::run_cv(d, small_config(), 3, 0, 0),
                  std::invalid_argument);
}

TEST_CASE("boundary_grid probes cell centres in row-major order") {
  DeterministicRng gen(66);
  const Dataset d = testutil::random_dataset(gen, 80, 2, 2);
  const auto e = triage::fit_ensemble(d, small_config());
  const triage::BoundaryGrid g = triage::boundary_grid(e, -1.0, 3.0, 2.0, 4.0, 4, 2);

  REQUIRE(g.cells.size() == 8);
  CHECK(g.nx == 4);
  CHECK(g.ny == 2);
  CHECK(g.class_names == d.class_names());
  const double dx = 4.0 / 4.0;
  const double dy = 2.0 / 2.0;
  for (int iy = 0; iy < 2; ++iy) {
    for (int ix = 0; ix < 4; ++ix) {
      const auto& cell = g.cells[static_cast<size_t>(iy * 4 + ix)];
      CHECK(cell.x == -1.0 + (ix + 0.5) * dx);
      CHECK(cell.y == 2.0 + (iy + 0.5) * dy);
      const double point[2] = {cell.x, cell.y};
      const auto p = triage::predict_ensemble(e, point);
      CHECK(cell.label == p.label);
      CHECK(cell.route == p.route);
    }
  }
}

TEST_CASE("boundary_grid rejects bad models and ranges") {
  DeterministicRng gen(67);
  const Dataset three = testutil::random_dataset(gen, 40, 3, 2);
  const auto e3 = triage::fit_ensemble(three, small_config());
  CHECK_THROWS_AS(triage::boundary_grid(e3, 0, 1, 0, 1, 2, 2),
                  std::invalid_argument);

  const Dataset two = testutil::random_dataset(gen, 40, 2, 2);
  const auto e2 = triage::fit_ensemble(two, small_config());
  CHECK_THROWS_AS(triage::boundary_grid(e2, 1, 1, 0, 1, 2, 2),
                  std::invalid_argument);
  CHECK_THROWS_AS(triage::boundary_grid(e2, 0, 1, 2, 1, 2, 2),
                  std::invalid_argument);
  CHECK_THROWS_AS(triage::boundary_grid(e2, 0, 1, 0, 1, 0, 2),
                  std::invalid_argument);
}
