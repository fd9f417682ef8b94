#include "triage/experiment.hpp"

#include <cmath>
#include <stdexcept>

#include "triage/folds.hpp"

namespace triage {

namespace {

struct SplitMetrics {
  double base_accuracy = 0.0;
  double final_accuracy = 0.0;
  double deferral_rate = 0.0;
};

SplitMetrics measure(const GraderDeferralEnsemble& e, const Dataset& part) {
  size_t base_ok = 0;
  size_t final_ok = 0;
  size_t deferred = 0;
  for (size_t i = 0; i < part.n_rows(); ++i) {
    const auto x = part.row(i);
    const int y = part.label(i);
    if (predict_tree(e.base, x) == y) {
      ++base_ok;
    }
    const RoutedPrediction p = predict_ensemble(e, x);
    if (p.label == y) {
      ++final_ok;
    }
    if (p.route == Route::Hard) {
      ++deferred;
    }
  }
  const auto n = static_cast<double>(part.n_rows());
  return {static_cast<double>(base_ok) / n, static_cast<double>(final_ok) / n,
          static_cast<double>(deferred) / n};
}

}  // namespace

RunReport evaluate_holdout(const GraderDeferralEnsemble& e, const Dataset& train,
                           const Dataset& test) {
  RunReport r;
  r.train_rows = train.n_rows();
  r.test_rows = test.n_rows();
  const SplitMetrics on_train = measure(e, train);
  const SplitMetrics on_test = measure(e, test);
  r.base_train_accuracy = on_train.base_accuracy;
  r.base_test_accuracy = on_test.base_accuracy;
  r.final_train_accuracy = on_train.final_accuracy;
  r.final_test_accuracy = on_test.final_accuracy;
  r.deferral_train_rate = on_train.deferral_rate;
  r.deferral_test_rate = on_test.deferral_rate;
  r.trivial_grader = e.fit_stats.trivial_grader;
  return r;
}

Aggregate aggregate(const std::vector<double>& values) {
  if (values.empty()) {
    throw std::invalid_argument("aggregate: needs at least one value");
  }
  const auto n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) {
    sum += v;
  }
  Aggregate a;
  a.mean = sum / n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) {
      const double dev = v - a.mean;
      ss += dev * dev;
    }
    a.stddev = std::sqrt(ss / (n - 1.0));
  }
  return a;
}

CvReport run_cv(const Dataset& d, const EnsembleConfig& cfg, int k, int repeats,
                uint64_t seed) {
  if (repeats < 1) {
    throw std::invalid_argument("run_cv: repeats must be at least 1");
  }
  CvReport report;
  report.k = k;
  report.repeats = repeats;
  report.seed = seed;
  report.runs.reserve(static_cast<size_t>(k) * static_cast<size_t>(repeats));

  for (int r = 0; r < repeats; ++r) {
    const FoldPlan plan =
        stratified_kfold(d, k, DeterministicRng(seed, static_cast<uint64_t>(r)), r);
    for (int f = 0; f < k; ++f) {
      const auto [train, test] = split_by_fold(d, plan, f);
      EnsembleConfig run_cfg = cfg;
      run_cfg.seed = mix_seed(seed, {static_cast<uint64_t>(r), static_cast<uint64_t>(f)});
      const GraderDeferralEnsemble e = fit_ensemble(train, run_cfg);
      RunReport run = evaluate_holdout(e, train, test);
      run.repeat = r;
      run.fold = f;
      report.runs.push_back(run);
    }
  }

  std::vector<double> values(report.runs.size());
  const auto fill = [&](double RunReport::* field) {
    for (size_t i = 0; i < report.runs.size(); ++i) {
      values[i] = report.runs[i].*field;
    }
    return aggregate(values);
  };
  report.base_train = fill(&RunReport::base_train_accuracy);
  report.base_test = fill(&RunReport::base_test_accuracy);
  report.final_train = fill(&RunReport::final_train_accuracy);
  report.final_test = fill(&RunReport::final_test_accuracy);
  report.deferral_train = fill(&RunReport::deferral_train_rate);
  report.deferral_test = fill(&RunReport::deferral_test_rate);
  return report;
}

BoundaryGrid boundary_grid(const GraderDeferralEnsemble& e, double x_min,
                           double x_max, double y_min, double y_max, int nx,
                           int ny) {
  if (e.feature_names.size() != 2) {
    throw std::invalid_argument("boundary_grid: model must have exactly two features");
  }
  if (!(x_min < x_max) || !(y_min < y_max)) {
    throw std::invalid_argument("boundary_grid: empty range");
  }
  if (nx < 1 || ny < 1) {
    throw std::invalid_argument("boundary_grid: grid must have at least one cell");
  }
  BoundaryGrid g;
  g.x_min = x_min;
  g.x_max = x_max;
  g.y_min = y_min;
  g.y_max = y_max;
  g.nx = nx;
  g.ny = ny;
  g.class_names = e.class_names;
  g.cells.reserve(static_cast<size_t>(nx) * static_cast<size_t>(ny));
  const double dx = (x_max - x_min) / static_cast<double>(nx);
  const double dy = (y_max - y_min) / static_cast<double>(ny);
  for (int iy = 0; iy < ny; ++iy) {
    const double y = y_min + (static_cast<double>(iy) + 0.5) * dy;
    for (int ix = 0; ix < nx; ++ix) {
      const double x = x_min + (static_cast<double>(ix) + 0.5) * dx;
      const double point[2] = {x, y};
      const RoutedPrediction p = predict_ensemble(e, point);
      g.cells.push_back({x, y, p.label, p.route});
    }
  }
  return g;
}

}  // namespace triage
