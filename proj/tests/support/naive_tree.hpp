#pragma once

// Independent greedy CART reference for differential testing. Same defined
// arithmetic and tie rules as the library, but written from scratch the
// slow way: every candidate threshold re-counts classes with a fresh pass
// over the rows, no sorting tricks, no incremental updates. Any divergence
// between this and the optimized builder is a bug in one of them.

#include <algorithm>
#include <memory>
#include <optional>
#include <vector>

#include "triage/dataset.hpp"

namespace naive {

struct Node {
  int feature = -1;
  double threshold = 0.0;
  std::unique_ptr<Node> left;
  std::unique_ptr<Node> right;
  int predicted_class = -1;
  std::vector<size_t> class_counts;
  bool is_leaf() const { return feature < 0; }
};

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double score = 0.0;
};

inline double side_impurity(const triage::Dataset& d,
                            const std::vector<size_t>& rows, int feature,
                            double threshold, bool left_side, size_t* n_out) {
  std::vector<size_t> counts(d.n_classes(), 0);
  size_t n = 0;
  for (size_t r : rows) {
    const bool goes_left = d.value(r, static_cast<size_t>(feature)) <= threshold;
    if (goes_left == left_side) {
      ++counts[static_cast<size_t>(d.label(r))];
      ++n;
    }
  }
  *n_out = n;
  if (n == 0) {
    return 0.0;
  }
  uint64_t ss = 0;
  for (size_t c : counts) {
    ss += static_cast<uint64_t>(c) * static_cast<uint64_t>(c);
  }
  return 1.0 - static_cast<double>(ss) /
                   (static_cast<double>(n) * static_cast<double>(n));
}

inline std::optional<Split> best_split(const triage::Dataset& d,
                                       const std::vector<size_t>& rows,
                                       int min_samples_leaf) {
  std::optional<Split> best;
  for (int f = 0; f < static_cast<int>(d.n_features()); ++f) {
    std::vector<double> values;
    for (size_t r : rows) {
      values.push_back(d.value(r, static_cast<size_t>(f)));
    }
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    for (size_t i = 0; i + 1 < values.size(); ++i) {
      const double lo = values[i];
      const double hi = values[i + 1];
      double threshold = (lo + hi) * 0.5;
      if (!(threshold >= lo && threshold < hi)) {
        threshold = lo;
      }
      size_t nl = 0;
      size_t nr = 0;
      const double gl = side_impurity(d, rows, f, threshold, true, &nl);
      const double gr = side_impurity(d, rows, f, threshold, false, &nr);
      if (nl < static_cast<size_t>(min_samples_leaf) ||
          nr < static_cast<size_t>(min_samples_leaf)) {
        continue;
      }
      const double score = (static_cast<double>(nl) * gl +
                            static_cast<double>(nr) * gr) /
                           static_cast<double>(rows.size());
      if (!best || score < best->score) {
        best = Split{f, threshold, score};
      }
    }
  }
  return best;
}

inline std::unique_ptr<Node> fit(const triage::Dataset& d,
                                 const std::vector<size_t>& rows, int depth,
                                 int max_depth, int min_samples_split,
                                 int min_samples_leaf) {
  auto node = std::make_unique<Node>();
  node->class_counts.assign(d.n_classes(), 0);
  for (size_t r : rows) {
    ++node->class_counts[static_cast<size_t>(d.label(r))];
  }
  node->predicted_class = 0;
  for (size_t k = 1; k < node->class_counts.size(); ++k) {
    if (node->class_counts[k] >
        node->class_counts[static_cast<size_t>(node->predicted_class)]) {
      node->predicted_class = static_cast<int>(k);
    }
  }

  const bool pure = *std::max_element(node->class_counts.begin(),
                                      node->class_counts.end()) == rows.size();
  if (pure || depth >= max_depth ||
      rows.size() < static_cast<size_t>(min_samples_split)) {
    return node;
  }
  const auto split = best_split(d, rows, min_samples_leaf);
  if (!split) {
    return node;
  }
  std::vector<size_t> lrows;
  std::vector<size_t> rrows;
  for (size_t r : rows) {
    if (d.value(r, static_cast<size_t>(split->feature)) <= split->threshold) {
      lrows.push_back(r);
    } else {
      rrows.push_back(r);
    }
  }
  node->feature = split->feature;
  node->threshold = split->threshold;
  node->left = fit(d, lrows, depth + 1, max_depth, min_samples_split,
                   min_samples_leaf);
  node->right = fit(d, rrows, depth + 1, max_depth, min_samples_split,
                    min_samples_leaf);
  return node;
}

inline std::unique_ptr<Node> fit_tree(const triage::Dataset& d, int max_depth,
                                      int min_samples_split = 2,
                                      int min_samples_leaf = 1) {
  std::vector<size_t> rows(d.n_rows());
  for (size_t i = 0; i < rows.size(); ++i) {
    rows[i] = i;
  }
  return fit(d, rows, 0, max_depth, min_samples_split, min_samples_leaf);
}

inline int predict(const Node& n, std::span<const double> x) {
  if (n.is_leaf()) {
    return n.predicted_class;
  }
  return x[static_cast<size_t>(n.feature)] <= n.threshold ? predict(*n.left, x)
                                                          : predict(*n.right, x);
}

}  // namespace naive
