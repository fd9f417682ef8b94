#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "triage/dataset.hpp"
#include "triage/ensemble.hpp"

namespace triage {

// Metrics of one fitted ensemble on one train/test split. Accuracies and
// rates are fractions in [0, 1]; report writers scale to percent.
struct RunReport {
  int repeat = 0;
  int fold = 0;
  size_t train_rows = 0;
  size_t test_rows = 0;
  double base_train_accuracy = 0.0;
  double base_test_accuracy = 0.0;
  double final_train_accuracy = 0.0;
  double final_test_accuracy = 0.0;
  double deferral_train_rate = 0.0;
  double deferral_test_rate = 0.0;
  bool trivial_grader = false;
};

struct Aggregate {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation, n - 1
};

struct CvReport {
  int k = 0;
  int repeats = 0;
  uint64_t seed = 0;
  std::vector<RunReport> runs;  // repeat-major, folds in order within
  Aggregate base_train;
  Aggregate base_test;
  Aggregate final_train;
  Aggregate final_test;
  Aggregate deferral_train;
  Aggregate deferral_test;
};

// Fills the six metric fields of a report from one fitted ensemble: base
// tree accuracy alone, routed ensemble accuracy, and the fraction of rows
// the grader defers, on both parts.
RunReport evaluate_holdout(const GraderDeferralEnsemble& e, const Dataset& train,
                           const Dataset& test);

// Repeated stratified cross validation: repeat r lays out folds with the
// generator stream (seed, r), and the run on (repeat r, fold f) trains
// with the ensemble seed mixed from (seed, r, f). Runs are independent of
// execution order. Aggregates are plain means and sample standard
// deviations over all k * repeats runs.
CvReport run_cv(const Dataset& d, const EnsembleConfig& cfg, int k, int repeats,
                uint64_t seed);

Aggregate aggregate(const std::vector<double>& values);

// A rectangular probe of a two-feature ensemble: rows of cell centres,
// y varying slowest, x fastest, both ascending.
struct BoundaryCell {
  double x = 0.0;
  double y = 0.0;
  int label = -1;
  Route route = Route::Easy;
};

struct BoundaryGrid {
  double x_min = 0.0, x_max = 0.0;
  double y_min = 0.0, y_max = 0.0;
  int nx = 0, ny = 0;
  std::vector<BoundaryCell> cells;
  std::vector<std::string> class_names;
};

// Evaluates the ensemble at the centre of every cell of an nx-by-ny grid
// over [x_min, x_max] x [y_min, y_max]. The model must have exactly two
// features.
BoundaryGrid boundary_grid(const GraderDeferralEnsemble& e, double x_min,
                           double x_max, double y_min, double y_max, int nx,
                           int ny);

}  // namespace triage
