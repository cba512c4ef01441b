#pragma once

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

namespace darepair {

/// splitmix64; used everywhere we need a portable, reproducible stream.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, bound). bound must be > 0.
  uint64_t bounded(uint64_t bound) { return next() % bound; }

 private:
  uint64_t state_;
};

/// Derives an independent stream seed from a master seed and a tag, so that
/// per-project / per-error-type shuffles do not depend on iteration order.
uint64_t sub_seed(uint64_t master, std::string_view tag);
uint64_t sub_seed(uint64_t master, std::string_view tag_a, std::string_view tag_b);

/// Portable Fisher-Yates shuffle (std::shuffle is not stable across library
/// implementations).
template <typename T>
void seeded_shuffle(std::vector<T>& values, uint64_t seed) {
  SplitMix64 rng(seed);
  for (size_t i = values.size(); i > 1; --i) {
    size_t j = static_cast<size_t>(rng.bounded(i));
    using std::swap;
    swap(values[i - 1], values[j]);
  }
}

}  // namespace darepair
