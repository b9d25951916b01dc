#pragma once

#include <cstdint>

namespace qpr {

/// Counter-based uniform stream: draw k of stream `index` is a pure function
/// of (seed, index, k). Monte Carlo sample i owns stream i, so results do not
/// depend on how samples are split across workers.
class CounterStream {
 public:
  CounterStream(std::uint64_t seed, std::uint64_t index) : key_(mix(seed ^ mix(index + 0x632be59bd9b4e019ULL))) {}

  /// Next 64 random bits.
  std::uint64_t next_u64() { return mix(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

 private:
  // SplitMix64 finalizer.
  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace qpr
