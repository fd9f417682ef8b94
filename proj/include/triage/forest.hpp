#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "triage/dataset.hpp"
#include "triage/rng.hpp"
#include "triage/tree.hpp"

namespace triage {

struct ForestParams {
  int n_trees = 100;
  // Tree growth is unbounded unless set.
  std::optional<int> max_depth;
  // Features drawn per split; unset means floor(sqrt(n_features)), at
  // least 1.
  std::optional<int> features_per_split;
  bool bootstrap = true;
  uint64_t seed = 0;
  int min_samples_split = 2;
  int min_samples_leaf = 1;
};

struct RandomForest {
  std::vector<DecisionTree> trees;
  ForestParams params;
  int n_features = 0;
  int n_classes = 0;
};

// n_rows draws with replacement, in draw order.
Dataset bootstrap_sample(const Dataset& d, DeterministicRng& rng);

// Bagged trees with per-node feature sampling. Tree i takes every draw
// from the stream (seed, i): first its bootstrap rows, then the feature
// subsets in growth order. Trees therefore do not depend on how many
// other trees exist.
RandomForest fit_forest(const Dataset& d, const ForestParams& params);

// Mean of the per-tree leaf class frequencies.
std::vector<double> predict_forest_proba(const RandomForest& f,
                                         std::span<const double> x);

// Argmax of the averaged frequencies, ties to the lowest class index.
int predict_forest(const RandomForest& f, std::span<const double> x);

}  // namespace triage
