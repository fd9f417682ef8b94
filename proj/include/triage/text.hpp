#pragma once

#include <string>

namespace triage {

// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

// Fixed-point with the given number of decimals (for report tables).
std::string format_fixed(double v, int decimals);

}  // namespace triage
