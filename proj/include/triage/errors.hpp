#pragma once

#include <stdexcept>
#include <string>

namespace triage {

// Malformed or unreadable input data: CSV files, saved model files.
// Contract violations (bad parameters, dimension mismatches) use
// std::invalid_argument instead; the CLI maps the two onto distinct
// exit codes.
struct DataError : std::runtime_error {
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace triage
