#include "triage/tree.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>

#include "triage/text.hpp"

namespace triage {

namespace {

void check_params(const TreeParams& p) {
  if (p.max_depth < 0) {
    throw std::invalid_argument("TreeParams: max_depth must be non-negative");
  }
  if (p.min_samples_split < 2) {
    throw std::invalid_argument("TreeParams: min_samples_split must be at least 2");
  }
  if (p.min_samples_leaf < 1) {
    throw std::invalid_argument("TreeParams: min_samples_leaf must be at least 1");
  }
}

int argmax_class(const std::vector<size_t>& counts) {
  int best = 0;
  for (size_t k = 1; k < counts.size(); ++k) {
    if (counts[k] > counts[static_cast<size_t>(best)]) {
      best = static_cast<int>(k);
    }
  }
  return best;
}

// Split search restricted to an explicit feature set. Scans each feature's
// rows in sorted order with incremental integer sums of squared counts, so
// the impurity of every candidate comes out in the same few floating point
// operations regardless of scan position.
std::optional<SplitCandidate> best_split_over(const Dataset& d,
                                              std::span<const size_t> rows,
                                              std::span<const int> features,
                                              int min_samples_leaf) {
  const size_t n = rows.size();
  const size_t n_classes = d.n_classes();
  std::optional<SplitCandidate> best;

  std::vector<std::pair<double, int>> ordered(n);
  std::vector<size_t> left_counts(n_classes);
  std::vector<size_t> right_counts(n_classes);

  for (int f : features) {
    for (size_t i = 0; i < n; ++i) {
      ordered[i] = {d.value(rows[i], static_cast<size_t>(f)), d.label(rows[i])};
    }
    std::sort(ordered.begin(), ordered.end());

    std::fill(left_counts.begin(), left_counts.end(), 0);
    std::fill(right_counts.begin(), right_counts.end(), 0);
    uint64_t left_ss = 0;
    uint64_t right_ss = 0;
    for (const auto& [value, label] : ordered) {
      auto& c = right_counts[static_cast<size_t>(label)];
      right_ss += 2 * c + 1;
      ++c;
    }

    for (size_t i = 0; i + 1 < n; ++i) {
      const auto label = static_cast<size_t>(ordered[i].second);
      auto& cl = left_counts[label];
      auto& cr = right_counts[label];
      left_ss += 2 * cl + 1;
      ++cl;
      right_ss -= 2 * cr - 1;
      --cr;

      const double lo = ordered[i].first;
      const double hi = ordered[i + 1].first;
      if (!(hi > lo)) {
        continue;  // cut only between distinct values
      }
      const size_t nl = i + 1;
      const size_t nr = n - nl;
      if (nl < static_cast<size_t>(min_samples_leaf) ||
          nr < static_cast<size_t>(min_samples_leaf)) {
        continue;
      }

      double threshold = (lo + hi) * 0.5;
      if (!(threshold >= lo && threshold < hi)) {
        threshold = lo;  // rounding pushed the midpoint onto hi (or out)
      }

      const double gl =
          1.0 - static_cast<double>(left_ss) /
                    (static_cast<double>(nl) * static_cast<double>(nl));
      const double gr =
          1.0 - static_cast<double>(right_ss) /
                    (static_cast<double>(nr) * static_cast<double>(nr));
      const double weighted = (static_cast<double>(nl) * gl +
                               static_cast<double>(nr) * gr) /
                              static_cast<double>(n);

      // Strict improvement only: with features ascending and thresholds
      // ascending within a feature, keeping the first minimum implements
      // the (impurity, feature, threshold) tie-break order.
      if (!best || weighted < best->weighted_impurity) {
        best = SplitCandidate{f, threshold, weighted};
      }
    }
  }
  return best;
}

struct Builder {
  const Dataset& d;
  TreeParams params;
  int features_per_split;
  DeterministicRng* rng;  // null: consider every feature at every node

  std::vector<TreeNode> nodes;
  int deepest = 0;
  std::vector<int> all_features;
  std::vector<int> sampled;

  std::span<const int> node_features() {
    if (rng == nullptr ||
        features_per_split >= static_cast<int>(d.n_features())) {
      return all_features;
    }
    // Partial Fisher-Yates over a fresh identity permutation, then sort the
    // sample so the lower-feature-index tie-break applies within it.
    sampled = all_features;
    for (int i = 0; i < features_per_split; ++i) {
      const auto j = static_cast<size_t>(i) +
                     rng->next_below(sampled.size() - static_cast<size_t>(i));
      std::swap(sampled[static_cast<size_t>(i)], sampled[j]);
    }
    std::sort(sampled.begin(), sampled.begin() + features_per_split);
    return {sampled.data(), static_cast<size_t>(features_per_split)};
  }

  int grow(std::vector<size_t>& rows, int depth) {
    std::vector<size_t> counts(d.n_classes(), 0);
    for (size_t r : rows) {
      ++counts[static_cast<size_t>(d.label(r))];
    }
    const bool pure =
        *std::max_element(counts.begin(), counts.end()) == rows.size();

    const int idx = static_cast<int>(nodes.size());
    nodes.emplace_back();

    std::optional<SplitCandidate> split;
    if (!pure && depth < params.max_depth &&
        rows.size() >= static_cast<size_t>(params.min_samples_split)) {
      split = best_split_over(d, rows, node_features(), params.min_samples_leaf);
    }

    if (!split) {
      auto& leaf = nodes[static_cast<size_t>(idx)];
      leaf.predicted_class = argmax_class(counts);
      leaf.class_counts = std::move(counts);
      deepest = std::max(deepest, depth);
      return idx;
    }

    std::vector<size_t> left_rows;
    std::vector<size_t> right_rows;
    for (size_t r : rows) {
      if (d.value(r, static_cast<size_t>(split->feature)) <= split->threshold) {
        left_rows.push_back(r);
      } else {
        right_rows.push_back(r);
      }
    }
    rows.clear();
    rows.shrink_to_fit();

    const int left = grow(left_rows, depth + 1);
    const int right = grow(right_rows, depth + 1);
    auto& node = nodes[static_cast<size_t>(idx)];  // vector may have moved
    node.feature = split->feature;
    node.threshold = split->threshold;
    node.left = left;
    node.right = right;
    node.predicted_class = argmax_class(counts);
    node.class_counts = std::move(counts);
    return idx;
  }
};

DecisionTree finish(Builder&& b) {
  DecisionTree t;
  t.nodes = std::move(b.nodes);
  t.params = b.params;
  t.n_features = static_cast<int>(b.d.n_features());
  t.n_classes = static_cast<int>(b.d.n_classes());
  t.depth = b.deepest;
  return t;
}

const TreeNode& walk_to_leaf(const DecisionTree& t, std::span<const double> x,
                             std::vector<PathStep>* path) {
  if (t.nodes.empty()) {
    throw std::invalid_argument("predict_tree: tree has no nodes");
  }
  if (x.size() != static_cast<size_t>(t.n_features)) {
    throw std::invalid_argument("predict_tree: input has wrong number of features");
  }
  size_t idx = 0;
  while (!t.nodes[idx].is_leaf()) {
    const TreeNode& n = t.nodes[idx];
    const bool left = x[static_cast<size_t>(n.feature)] <= n.threshold;
    if (path != nullptr) {
      path->push_back({n.feature, n.threshold, left});
    }
    idx = static_cast<size_t>(left ? n.left : n.right);
  }
  return t.nodes[idx];
}

}  // namespace

int TreeParams::unlimited_depth() { return std::numeric_limits<int>::max(); }

double gini_impurity(std::span<const size_t> class_counts) {
  uint64_t total = 0;
  uint64_t ss = 0;
  for (size_t c : class_counts) {
    total += c;
    ss += static_cast<uint64_t>(c) * static_cast<uint64_t>(c);
  }
  if (total == 0) {
    throw std::invalid_argument("gini_impurity: total count must be positive");
  }
  return 1.0 - static_cast<double>(ss) /
                   (static_cast<double>(total) * static_cast<double>(total));
}

std::optional<SplitCandidate> best_split(const Dataset& d,
                                         std::span<const size_t> rows,
                                         const TreeParams& params) {
  check_params(params);
  if (rows.empty()) {
    throw std::invalid_argument("best_split: needs at least one row");
  }
  std::vector<int> features(d.n_features());
  std::iota(features.begin(), features.end(), 0);
  return best_split_over(d, rows, features, params.min_samples_leaf);
}

DecisionTree fit_tree(const Dataset& d, const TreeParams& params) {
  std::vector<size_t> rows(d.n_rows());
  std::iota(rows.begin(), rows.end(), size_t{0});
  DeterministicRng unused(0);
  return fit_tree_sampled(d, rows, params, static_cast<int>(d.n_features()),
                          unused);
}

DecisionTree fit_tree_sampled(const Dataset& d, std::span<const size_t> rows,
                              const TreeParams& params, int features_per_split,
                              DeterministicRng& rng) {
  check_params(params);
  if (rows.empty()) {
    throw std::invalid_argument("fit_tree: needs at least one row");
  }
  for (size_t r : rows) {
    if (r >= d.n_rows()) {
      throw std::invalid_argument("fit_tree: row index out of range");
    }
  }
  if (features_per_split < 1 ||
      features_per_split > static_cast<int>(d.n_features())) {
    throw std::invalid_argument("fit_tree: features_per_split out of range");
  }

  Builder b{d, params,
            features_per_split,
            features_per_split >= static_cast<int>(d.n_features()) ? nullptr
                                                                   : &rng,
            {}, 0, {}, {}};
  b.all_features.resize(d.n_features());
  std::iota(b.all_features.begin(), b.all_features.end(), 0);
  std::vector<size_t> root_rows(rows.begin(), rows.end());
  b.grow(root_rows, 0);
  return finish(std::move(b));
}

int predict_tree(const DecisionTree& t, std::span<const double> x) {
  return walk_to_leaf(t, x, nullptr).predicted_class;
}

std::vector<double> predict_tree_proba(const DecisionTree& t,
                                       std::span<const double> x) {
  const TreeNode& leaf = walk_to_leaf(t, x, nullptr);
  uint64_t total = 0;
  for (size_t c : leaf.class_counts) {
    total += c;
  }
  std::vector<double> proba(leaf.class_counts.size(), 0.0);
  for (size_t k = 0; k < proba.size(); ++k) {
    proba[k] = static_cast<double>(leaf.class_counts[k]) /
               static_cast<double>(total);
  }
  return proba;
}

std::vector<PathStep> decision_path(const DecisionTree& t,
                                    std::span<const double> x) {
  std::vector<PathStep> path;
  walk_to_leaf(t, x, &path);
  return path;
}

std::string export_text(const DecisionTree& t,
                        std::span<const std::string> feature_names,
                        std::span<const std::string> class_names) {
  if (feature_names.size() != static_cast<size_t>(t.n_features)) {
    throw std::invalid_argument("export_text: feature name count mismatch");
  }
  if (class_names.size() != static_cast<size_t>(t.n_classes)) {
    throw std::invalid_argument("export_text: class name count mismatch");
  }
  if (t.nodes.empty()) {
    throw std::invalid_argument("export_text: tree has no nodes");
  }
  std::string out;
  // Iterative preorder with explicit indent levels.
  std::vector<std::pair<int, int>> stack{{0, 0}};
  while (!stack.empty()) {
    const auto [idx, indent] = stack.back();
    stack.pop_back();
    const TreeNode& n = t.nodes[static_cast<size_t>(idx)];
    out.append(static_cast<size_t>(indent) * 2, ' ');
    if (n.is_leaf()) {
      out += "class: ";
      out += class_names[static_cast<size_t>(n.predicted_class)];
      out += " (";
      for (size_t k = 0; k < n.class_counts.size(); ++k) {
        if (k > 0) {
          out += ", ";
        }
        out += std::to_string(n.class_counts[k]);
      }
      out += ")\n";
    } else {
      out += feature_names[static_cast<size_t>(n.feature)];
      out += " <= ";
      out += format_double(n.threshold);
      out += "\n";
      stack.push_back({n.right, indent + 1});
      stack.push_back({n.left, indent + 1});
    }
  }
  return out;
}

std::string format_path(std::span<const PathStep> path,
                        std::span<const std::string> feature_names) {
  std::string out;
  for (const PathStep& step : path) {
    if (step.feature < 0 ||
        static_cast<size_t>(step.feature) >= feature_names.size()) {
      throw std::invalid_argument("format_path: feature index out of range");
    }
    out += feature_names[static_cast<size_t>(step.feature)];
    out += step.went_left ? " <= " : " > ";
    out += format_double(step.threshold);
    out += "\n";
  }
  return out;
}

}  // namespace triage
