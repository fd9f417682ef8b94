#include "triage/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <unordered_map>
#include <utility>

namespace triage {

namespace {

std::vector<std::string> split_cells(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  cells.push_back(cur);
  return cells;
}

std::string trim(const std::string& s) {
  const size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) {
    return "";
  }
  const size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& cell, size_t row, const std::string& column) {
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  if (first != last && *first == '+') {
    ++first;  // from_chars rejects an explicit plus sign
  }
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw DataError("row " + std::to_string(row) + ", column '" + column +
                    "': non-numeric value '" + cell + "'");
  }
  if (!std::isfinite(value)) {
    throw DataError("row " + std::to_string(row) + ", column '" + column +
                    "': non-finite value '" + cell + "'");
  }
  return value;
}

}  // namespace

Dataset::Dataset(std::vector<double> features, std::vector<int> labels,
                 std::vector<std::string> feature_names,
                 std::vector<std::string> class_names)
    : features_(std::move(features)),
      labels_(std::move(labels)),
      feature_names_(std::move(feature_names)),
      class_names_(std::move(class_names)),
      n_features_(feature_names_.size()) {
  if (n_features_ == 0) {
    throw std::invalid_argument("Dataset: needs at least one feature");
  }
  if (labels_.empty()) {
    throw std::invalid_argument("Dataset: needs at least one row");
  }
  if (class_names_.empty()) {
    throw std::invalid_argument("Dataset: needs at least one class");
  }
  if (features_.size() != labels_.size() * n_features_) {
    throw std::invalid_argument("Dataset: feature matrix does not match row count");
  }
  for (int y : labels_) {
    if (y < 0 || static_cast<size_t>(y) >= class_names_.size()) {
      throw std::invalid_argument("Dataset: label index out of range");
    }
  }
  for (double v : features_) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("Dataset: non-finite feature value");
    }
  }
}

std::vector<size_t> Dataset::class_counts() const {
  std::vector<size_t> counts(n_classes(), 0);
  for (int y : labels_) {
    ++counts[static_cast<size_t>(y)];
  }
  return counts;
}

Dataset Dataset::subset(std::span<const size_t> rows) const {
  std::vector<double> features;
  features.reserve(rows.size() * n_features_);
  std::vector<int> labels;
  labels.reserve(rows.size());
  for (size_t r : rows) {
    if (r >= n_rows()) {
      throw std::invalid_argument("Dataset::subset: row index out of range");
    }
    const auto src = row(r);
    features.insert(features.end(), src.begin(), src.end());
    labels.push_back(labels_[r]);
  }
  return Dataset(std::move(features), std::move(labels), feature_names_, class_names_);
}

Dataset Dataset::with_labels(std::vector<int> labels,
                             std::vector<std::string> class_names) const {
  if (labels.size() != labels_.size()) {
    throw std::invalid_argument("Dataset::with_labels: label count mismatch");
  }
  return Dataset(features_, std::move(labels), feature_names_, std::move(class_names));
}

Dataset load_csv(const std::string& path, const std::string& label_column) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open file: " + path);
  }

  std::string line;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    if (trim(line).empty()) {
      continue;
    }
    for (auto& cell : (header = split_cells(line))) {
      cell = trim(cell);
    }
    break;
  }
  if (header.empty()) {
    throw DataError(path + ": empty file");
  }

  size_t label_col = header.size() - 1;
  if (!label_column.empty()) {
    bool found = false;
    for (size_t c = 0; c < header.size(); ++c) {
      if (header[c] == label_column) {
        label_col = c;
        found = true;
        break;
      }
    }
    if (!found) {
      throw DataError(path + ": label column '" + label_column + "' not found in header");
    }
  }
  if (header.size() < 2) {
    throw DataError(path + ": needs at least one feature column and a label column");
  }

  std::vector<std::string> feature_names;
  for (size_t c = 0; c < header.size(); ++c) {
    if (c != label_col) {
      feature_names.push_back(header[c]);
    }
  }

  std::vector<double> features;
  std::vector<int> labels;
  std::vector<std::string> class_names;
  std::unordered_map<std::string, int> class_index;

  size_t data_row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) {
      continue;
    }
    ++data_row;
    const auto cells = split_cells(line);
    if (cells.size() != header.size()) {
      throw DataError(path + ": row " + std::to_string(data_row) + " has " +
                      std::to_string(cells.size()) + " columns, expected " +
                      std::to_string(header.size()));
    }
    for (size_t c = 0; c < cells.size(); ++c) {
      const std::string cell = trim(cells[c]);
      if (cell.empty()) {
        throw DataError(path + ": row " + std::to_string(data_row) + ", column '" +
                        header[c] + "': missing value");
      }
      if (c == label_col) {
        auto [it, inserted] =
            class_index.try_emplace(cell, static_cast<int>(class_names.size()));
        if (inserted) {
          class_names.push_back(cell);
        }
        labels.push_back(it->second);
      } else {
        try {
          features.push_back(parse_number(cell, data_row, header[c]));
        } catch (const DataError& e) {
          throw DataError(path + ": " + e.what());
        }
      }
    }
  }
  if (labels.empty()) {
    throw DataError(path + ": no data rows");
  }

  return Dataset(std::move(features), std::move(labels), std::move(feature_names),
                 std::move(class_names));
}

}  // namespace triage
