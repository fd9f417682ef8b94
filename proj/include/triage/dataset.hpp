#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "triage/errors.hpp"

namespace triage {

// Numeric dataset: row-major feature matrix plus one integer class label
// per row. Class indices are assigned by first appearance of the label
// value in the source, so loading the same file twice yields the same
// encoding.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::vector<double> features, std::vector<int> labels,
          std::vector<std::string> feature_names,
          std::vector<std::string> class_names);

  size_t n_rows() const { return labels_.size(); }
  size_t n_features() const { return n_features_; }
  size_t n_classes() const { return class_names_.size(); }

  std::span<const double> row(size_t i) const {
    return {features_.data() + i * n_features_, n_features_};
  }
  double value(size_t row, size_t col) const {
    return features_[row * n_features_ + col];
  }
  int label(size_t i) const { return labels_[i]; }

  const std::vector<double>& features() const { return features_; }
  const std::vector<int>& labels() const { return labels_; }
  const std::vector<std::string>& feature_names() const { return feature_names_; }
  const std::vector<std::string>& class_names() const { return class_names_; }

  // Occurrences of each class, indexed by class.
  std::vector<size_t> class_counts() const;

  // New dataset holding the given rows in the given order; names and the
  // class encoding carry over unchanged. Indices may repeat.
  Dataset subset(std::span<const size_t> rows) const;

  // Same rows, different labels; class_names defines the new encoding.
  Dataset with_labels(std::vector<int> labels,
                      std::vector<std::string> class_names) const;

 private:
  std::vector<double> features_;
  std::vector<int> labels_;
  std::vector<std::string> feature_names_;
  std::vector<std::string> class_names_;
  size_t n_features_ = 0;
};

// Loads a comma-separated file with one header row naming the columns.
// Every column except the label column must hold finite decimal numbers.
// The label column is the last one unless `label_column` names another;
// its values may be arbitrary strings and become classes in order of first
// appearance. Blank lines are skipped. Malformed input (missing file,
// ragged rows, non-numeric or non-finite feature cells, empty cells,
// unknown label column) raises DataError naming the offending row and
// column.
Dataset load_csv(const std::string& path, const std::string& label_column = "");

}  // namespace triage
