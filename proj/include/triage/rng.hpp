#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <utility>

namespace triage {

// Counter-based deterministic generator: SplitMix64 (Vigna's public domain
// reference; the finalizer is Stafford's "mix13" variant). The state walks
// a Weyl sequence with increment 0x9E3779B97F4A7C15 and every draw is the
// mixed state, so a (seed, stream) pair fully determines the sequence.
// Only unsigned 64-bit arithmetic is involved; sequences are identical on
// every platform. Distinct streams start from states separated by the mix
// function and are used as independent generators.
class DeterministicRng {
 public:
  explicit DeterministicRng(uint64_t seed, uint64_t stream = 0);

  uint64_t seed() const { return seed_; }
  uint64_t stream() const { return stream_; }

  // Next raw 64-bit draw.
  uint64_t next_u64();

  // Uniform in [0, 1) with 53 bits of precision.
  double next_double();

  // Uniform in {0, ..., bound - 1} by rejection sampling; bound >= 1.
  uint64_t next_below(uint64_t bound);

  // Child generator on a stream derived from this one and `label`.
  // Independent of any draws made on the parent before or after.
  DeterministicRng derive(uint64_t label) const;

 private:
  uint64_t seed_;
  uint64_t stream_;
  uint64_t state_;
};

// Folds `labels` into `seed` to give nested components (per-run models,
// per-stage sub-seeds) their own seed space.
uint64_t mix_seed(uint64_t seed, std::initializer_list<uint64_t> labels);

// In-place Fisher-Yates shuffle driven by `rng`; draws exactly
// values.size() - 1 times for non-trivial sizes.
template <typename T>
void shuffle(std::span<T> values, DeterministicRng& rng) {
  for (size_t i = values.size(); i > 1; --i) {
    const size_t j = static_cast<size_t>(rng.next_below(i));
    std::swap(values[i - 1], values[j]);
  }
}

}  // namespace triage
