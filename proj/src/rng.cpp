#include "triage/rng.hpp"

#include <stdexcept>

namespace triage {

namespace {

constexpr uint64_t kWeyl = 0x9E3779B97F4A7C15ull;

uint64_t mix64(uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

}  // namespace

DeterministicRng::DeterministicRng(uint64_t seed, uint64_t stream)
    : seed_(seed),
      stream_(stream),
      state_(mix64(seed + kWeyl) ^ mix64(stream * 0xBF58476D1CE4E5B9ull + kWeyl)) {}

uint64_t DeterministicRng::next_u64() {
  state_ += kWeyl;
  return mix64(state_);
}

double DeterministicRng::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

uint64_t DeterministicRng::next_below(uint64_t bound) {
  if (bound == 0) {
    throw std::invalid_argument("next_below: bound must be at least 1");
  }
  // Reject draws past the largest multiple of bound to keep the result
  // exactly uniform.
  const uint64_t zone = (UINT64_MAX / bound) * bound;
  uint64_t v = next_u64();
  while (v >= zone) {
    v = next_u64();
  }
  return v % bound;
}

DeterministicRng DeterministicRng::derive(uint64_t label) const {
  return DeterministicRng(seed_, mix64(stream_ * 0xBF58476D1CE4E5B9ull + label + kWeyl));
}

uint64_t mix_seed(uint64_t seed, std::initializer_list<uint64_t> labels) {
  uint64_t z = mix64(seed + kWeyl);
  for (uint64_t label : labels) {
    z = mix64(z ^ (label + kWeyl));
  }
  return z;
}

}  // namespace triage
