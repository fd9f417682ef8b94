#include "triage/forest.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace triage {

namespace {

int resolve_features_per_split(const ForestParams& p, size_t n_features) {
  if (p.features_per_split) {
    if (*p.features_per_split < 1 ||
        *p.features_per_split > static_cast<int>(n_features)) {
      throw std::invalid_argument(
          "ForestParams: features_per_split out of range");
    }
    return *p.features_per_split;
  }
  const int m = static_cast<int>(std::floor(std::sqrt(static_cast<double>(n_features))));
  return std::max(1, m);
}

}  // namespace

Dataset bootstrap_sample(const Dataset& d, DeterministicRng& rng) {
  std::vector<size_t> rows(d.n_rows());
  for (auto& r : rows) {
    r = static_cast<size_t>(rng.next_below(d.n_rows()));
  }
  return d.subset(rows);
}

RandomForest fit_forest(const Dataset& d, const ForestParams& params) {
  if (params.n_trees < 1) {
    throw std::invalid_argument("ForestParams: n_trees must be at least 1");
  }
  if (params.max_depth && *params.max_depth < 0) {
    throw std::invalid_argument("ForestParams: max_depth must be non-negative");
  }
  const int m = resolve_features_per_split(params, d.n_features());

  TreeParams tp;
  tp.max_depth = params.max_depth ? *params.max_depth : TreeParams::unlimited_depth();
  tp.min_samples_split = params.min_samples_split;
  tp.min_samples_leaf = params.min_samples_leaf;

  RandomForest f;
  f.params = params;
  f.n_features = static_cast<int>(d.n_features());
  f.n_classes = static_cast<int>(d.n_classes());
  f.trees.reserve(static_cast<size_t>(params.n_trees));

  std::vector<size_t> all_rows(d.n_rows());
  std::iota(all_rows.begin(), all_rows.end(), size_t{0});

  for (int i = 0; i < params.n_trees; ++i) {
    DeterministicRng rng(params.seed, static_cast<uint64_t>(i));
    if (params.bootstrap) {
      const Dataset sample = bootstrap_sample(d, rng);
      f.trees.push_back(fit_tree_sampled(sample, all_rows, tp, m, rng));
    } else {
      f.trees.push_back(fit_tree_sampled(d, all_rows, tp, m, rng));
    }
  }
  return f;
}

std::vector<double> predict_forest_proba(const RandomForest& f,
                                         std::span<const double> x) {
  if (f.trees.empty()) {
    throw std::invalid_argument("predict_forest: forest has no trees");
  }
  std::vector<double> mean(static_cast<size_t>(f.n_classes), 0.0);
  for (const DecisionTree& t : f.trees) {
    const std::vector<double> p = predict_tree_proba(t, x);
    for (size_t k = 0; k < mean.size(); ++k) {
      mean[k] += p[k];
    }
  }
  for (double& v : mean) {
    v /= static_cast<double>(f.trees.size());
  }
  return mean;
}

int predict_forest(const RandomForest& f, std::span<const double> x) {
  const std::vector<double> proba = predict_forest_proba(f, x);
  size_t best = 0;
  for (size_t k = 1; k < proba.size(); ++k) {
    if (proba[k] > proba[best]) {
      best = k;
    }
  }
  return static_cast<int>(best);
}

}  // namespace triage
