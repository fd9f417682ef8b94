#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "triage/dataset.hpp"
#include "triage/rng.hpp"

namespace triage {

struct TreeParams {
  // Longest allowed root-to-leaf path, counted in splits: 0 forces a
  // single leaf. Use unlimited_depth() for no bound.
  int max_depth = 4;
  int min_samples_split = 2;
  int min_samples_leaf = 1;

  static int unlimited_depth();
};

// One node of a binary classification tree, stored in a flat array.
// Internal nodes route value <= threshold to `left` and value > threshold
// to `right`. Every node keeps its training class counts; at leaves
// `predicted_class` is their argmax with ties going to the lowest index.
struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  std::vector<size_t> class_counts;
  int predicted_class = -1;

  bool is_leaf() const { return feature < 0; }
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // preorder; nodes[0] is the root
  TreeParams params;
  int n_features = 0;
  int n_classes = 0;
  int depth = 0;  // deepest leaf, in splits; 0 for a lone leaf
};

struct SplitCandidate {
  int feature = -1;
  double threshold = 0.0;
  double weighted_impurity = 0.0;  // count-weighted mean child impurity
};

// One internal-node condition on a root-to-leaf walk.
struct PathStep {
  int feature = -1;
  double threshold = 0.0;
  bool went_left = false;  // true when value <= threshold held
};

// Gini impurity 1 - sum of squared class proportions; total count must be
// positive.
double gini_impurity(std::span<const size_t> class_counts);

// Exhaustive split search over the given rows, all features considered.
// Candidate thresholds are midpoints between consecutive distinct sorted
// values of a feature. Picks the lowest weighted child impurity; ties break
// to the lower feature index, then the lower threshold. Returns nullopt
// when no candidate gives both children at least min_samples_leaf rows.
std::optional<SplitCandidate> best_split(const Dataset& d,
                                         std::span<const size_t> rows,
                                         const TreeParams& params);

// Greedy recursive construction over all rows; fully deterministic.
// A node becomes a leaf when it is pure, at max_depth, below
// min_samples_split, or when no valid split exists.
DecisionTree fit_tree(const Dataset& d, const TreeParams& params);

// Forest building block: same construction, but restricted to the given
// rows and, at every split search, to a fresh uniform sample of
// `features_per_split` distinct features drawn from `rng` (pass
// n_features to consider all). Nodes that end as leaves without a search
// draw nothing.
DecisionTree fit_tree_sampled(const Dataset& d, std::span<const size_t> rows,
                              const TreeParams& params, int features_per_split,
                              DeterministicRng& rng);

int predict_tree(const DecisionTree& t, std::span<const double> x);

// Class frequencies of the leaf that x lands in.
std::vector<double> predict_tree_proba(const DecisionTree& t,
                                       std::span<const double> x);

// The internal-node conditions x passes through, root first; empty when
// the tree is a single leaf.
std::vector<PathStep> decision_path(const DecisionTree& t,
                                    std::span<const double> x);

// Indented one-node-per-line rendering, two spaces per level. Internal
// nodes print as "name <= threshold" with the left subtree first; leaves
// print as "class: name (c0, c1, ...)" listing training counts per class.
// Thresholds use the shortest decimal form that parses back exactly.
std::string export_text(const DecisionTree& t,
                        std::span<const std::string> feature_names,
                        std::span<const std::string> class_names);

// One held condition per line: "name <= threshold" when the step went
// left, "name > threshold" otherwise.
std::string format_path(std::span<const PathStep> path,
                        std::span<const std::string> feature_names);

}  // namespace triage
