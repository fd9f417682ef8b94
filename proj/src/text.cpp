#include "triage/text.hpp"

#include <charconv>
#include <cstdio>
#include <stdexcept>

namespace triage {

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) {
    throw std::runtime_error("format_double: conversion failed");
  }
  return std::string(buf, ptr);
}

std::string format_fixed(double v, int decimals) {
  char buf[64];
  const int n = std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  if (n < 0 || n >= static_cast<int>(sizeof(buf))) {
    throw std::runtime_error("format_fixed: conversion failed");
  }
  return std::string(buf, static_cast<size_t>(n));
}

}  // namespace triage
