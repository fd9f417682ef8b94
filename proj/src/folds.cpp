#include "triage/folds.hpp"

#include <iostream>
#include <stdexcept>

namespace triage {

FoldPlan stratified_kfold(const Dataset& d, int k, DeterministicRng rng,
                          int repeat_id) {
  if (k < 2) {
    throw std::invalid_argument("stratified_kfold: k must be at least 2");
  }
  if (static_cast<size_t>(k) > d.n_rows()) {
    throw std::invalid_argument("stratified_kfold: k exceeds the number of rows");
  }

  std::vector<std::vector<size_t>> by_class(d.n_classes());
  for (size_t i = 0; i < d.n_rows(); ++i) {
    by_class[static_cast<size_t>(d.label(i))].push_back(i);
  }

  FoldPlan plan;
  plan.k = k;
  plan.repeat_id = repeat_id;
  plan.assignments.assign(d.n_rows(), 0);

  // Deal round robin with the position carried across classes; this keeps
  // both per-class and overall fold sizes within one of each other.
  int next_fold = 0;
  for (size_t c = 0; c < by_class.size(); ++c) {
    auto& rows = by_class[c];
    if (rows.size() < static_cast<size_t>(k)) {
      std::cerr << "warning: class '" << d.class_names()[c] << "' has "
                << rows.size() << " rows, fewer than the " << k
                << " folds; some folds will lack this class\n";
    }
    shuffle(std::span<size_t>(rows), rng);
    for (size_t r : rows) {
      plan.assignments[r] = next_fold;
      next_fold = (next_fold + 1) % k;
    }
  }
  return plan;
}

std::pair<Dataset, Dataset> split_by_fold(const Dataset& d, const FoldPlan& plan,
                                          int test_fold) {
  if (plan.assignments.size() != d.n_rows()) {
    throw std::invalid_argument("split_by_fold: plan does not match dataset");
  }
  if (test_fold < 0 || test_fold >= plan.k) {
    throw std::invalid_argument("split_by_fold: test fold out of range");
  }
  std::vector<size_t> train_rows;
  std::vector<size_t> test_rows;
  for (size_t i = 0; i < d.n_rows(); ++i) {
    if (plan.assignments[i] == test_fold) {
      test_rows.push_back(i);
    } else {
      train_rows.push_back(i);
    }
  }
  if (train_rows.empty() || test_rows.empty()) {
    throw std::invalid_argument("split_by_fold: a fold side is empty");
  }
  return {d.subset(train_rows), d.subset(test_rows)};
}

}  // namespace triage
