#include "triage/smote.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

#include "triage/text.hpp"

namespace triage {

std::vector<size_t> k_nearest(const std::vector<std::span<const double>>& points,
                              size_t query, int k) {
  if (query >= points.size()) {
    throw std::invalid_argument("k_nearest: query index out of range");
  }
  if (k < 1 || static_cast<size_t>(k) > points.size() - 1) {
    throw std::invalid_argument("k_nearest: k out of range");
  }
  std::vector<std::pair<double, size_t>> by_distance;
  by_distance.reserve(points.size() - 1);
  const std::span<const double> q = points[query];
  for (size_t i = 0; i < points.size(); ++i) {
    if (i == query) {
      continue;
    }
    double d2 = 0.0;
    for (size_t j = 0; j < q.size(); ++j) {
      const double diff = points[i][j] - q[j];
      d2 += diff * diff;
    }
    by_distance.emplace_back(d2, i);
  }
  // Pair ordering sends equal distances to the lower index.
  std::sort(by_distance.begin(), by_distance.end());
  std::vector<size_t> nearest(static_cast<size_t>(k));
  for (size_t i = 0; i < nearest.size(); ++i) {
    nearest[i] = by_distance[i].second;
  }
  return nearest;
}

SmoteResult smote_balance(const Dataset& d, const SmoteParams& params,
                          DeterministicRng& rng) {
  if (params.k_neighbors < 1) {
    throw std::invalid_argument("SmoteParams: k_neighbors must be at least 1");
  }
  if (d.n_classes() != 2) {
    throw std::invalid_argument("smote_balance: needs exactly two classes");
  }

  const std::vector<size_t> counts = d.class_counts();
  if (counts[0] == counts[1]) {
    return {d, {}, -1};
  }
  const int minority = counts[0] < counts[1] ? 0 : 1;
  const size_t need = counts[minority == 0 ? 1 : 0] - counts[static_cast<size_t>(minority)];

  std::vector<size_t> minority_rows;
  for (size_t i = 0; i < d.n_rows(); ++i) {
    if (d.label(i) == minority) {
      minority_rows.push_back(i);
    }
  }
  const size_t m = minority_rows.size();

  std::vector<double> features = d.features();
  std::vector<int> labels = d.labels();
  features.reserve(features.size() + need * d.n_features());
  labels.reserve(labels.size() + need);
  std::vector<SyntheticRecord> synthetics;
  synthetics.reserve(need);

  if (m == 1) {
    // No neighbours to interpolate towards: duplicate the lone row.
    const auto src = d.row(minority_rows[0]);
    for (size_t s = 0; s < need; ++s) {
      features.insert(features.end(), src.begin(), src.end());
      labels.push_back(minority);
      synthetics.push_back({minority_rows[0], minority_rows[0], 0.0});
    }
  } else {
    const int k_eff =
        std::min<int>(params.k_neighbors, static_cast<int>(m) - 1);
    std::vector<std::span<const double>> points;
    points.reserve(m);
    for (size_t r : minority_rows) {
      points.push_back(d.row(r));
    }
    std::vector<std::vector<size_t>> neighbors(m);
    for (size_t i = 0; i < m; ++i) {
      neighbors[i] = k_nearest(points, i, k_eff);
    }

    for (size_t s = 0; s < need; ++s) {
      const size_t p = static_cast<size_t>(rng.next_below(m));
      const size_t nb = neighbors[p][static_cast<size_t>(
          rng.next_below(static_cast<uint64_t>(k_eff)))];
      const double lambda = rng.next_double();
      const auto a = points[p];
      const auto b = points[nb];
      for (size_t j = 0; j < a.size(); ++j) {
        double v = a[j] + lambda * (b[j] - a[j]);
        // Rounding must not push the point off the segment's bounding box.
        v = std::clamp(v, std::min(a[j], b[j]), std::max(a[j], b[j]));
        features.push_back(v);
      }
      labels.push_back(minority);
      synthetics.push_back({minority_rows[p], minority_rows[nb], lambda});
    }
  }

  Dataset balanced(std::move(features), std::move(labels), d.feature_names(),
                   d.class_names());
  return {std::move(balanced), std::move(synthetics), minority};
}

std::string smote_log_csv(const SmoteResult& result) {
  std::string out = "parent_row,neighbor_row,lambda\n";
  for (const SyntheticRecord& rec : result.synthetics) {
    out += std::to_string(rec.parent_row);
    out += ',';
    out += std::to_string(rec.neighbor_row);
    out += ',';
    out += format_double(rec.lambda);
    out += '\n';
  }
  return out;
}

}  // namespace triage
