#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "triage/dataset.hpp"
#include "triage/rng.hpp"

namespace triage {

// Fold assignment for one repeat of stratified cross validation.
struct FoldPlan {
  int k = 0;
  std::vector<int> assignments;  // fold index per row, in {0, ..., k-1}
  int repeat_id = 0;
};

// Shuffles the rows of each class with `rng` (classes processed in index
// order), then deals them to folds round robin. The dealing position
// carries over from one class to the next, so fold sizes differ by at most
// one both per class and overall. A class with fewer than k rows leaves
// some folds without it; that prints a warning to stderr but still
// succeeds. Requires 2 <= k <= n_rows.
FoldPlan stratified_kfold(const Dataset& d, int k, DeterministicRng rng,
                          int repeat_id = 0);

// Rows assigned to `test_fold` become the test set, all other rows the
// training set; the original row order is preserved within both parts.
std::pair<Dataset, Dataset> split_by_fold(const Dataset& d, const FoldPlan& plan,
                                          int test_fold);

}  // namespace triage
