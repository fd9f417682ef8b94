#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "triage/dataset.hpp"
#include "triage/rng.hpp"

namespace triage {

struct SmoteParams {
  int k_neighbors = 5;
};

// Provenance of one synthetic row: the minority row it starts from, the
// neighbour it interpolates towards (both indices into the input dataset),
// and the interpolation position within [0, 1).
struct SyntheticRecord {
  size_t parent_row = 0;
  size_t neighbor_row = 0;
  double lambda = 0.0;
};

struct SmoteResult {
  // Original rows first and bit-identical, synthetics appended in creation
  // order, each labelled with the minority class.
  Dataset data;
  std::vector<SyntheticRecord> synthetics;
  int minority_class = -1;  // -1 when the input was already balanced
};

// Indices of the k rows of `points` nearest to `points[query]` in
// Euclidean distance, the query itself excluded, nearest first; distance
// ties resolve to the lower index. Requires 1 <= k <= points.size() - 1.
std::vector<size_t> k_nearest(const std::vector<std::span<const double>>& points,
                              size_t query, int k);

// Balances a two-class dataset by synthetic minority oversampling: each
// synthetic row lies on the segment from a uniformly drawn minority row
// towards one of its k nearest minority neighbours (k capped at
// minority_count - 1). A minority of a single row is duplicated verbatim.
// Per synthetic row the draws are: parent, neighbour choice, lambda; the
// single-row case draws nothing. Already balanced input comes back
// unchanged with no synthetics. Requires exactly two classes.
SmoteResult smote_balance(const Dataset& d, const SmoteParams& params,
                          DeterministicRng& rng);

// Provenance log as CSV with header parent_row,neighbor_row,lambda.
std::string smote_log_csv(const SmoteResult& result);

}  // namespace triage
