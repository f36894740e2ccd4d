#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>

namespace accel {

/// SplitMix64 stream, addressable by counter.
///
/// Draw k (0-based) of stream `seed` is mix(seed + (k + 1) * 0x9E3779B97F4A7C15)
/// where mix is the SplitMix64 finalizer. Derived quantities:
///   uniform  = (draw >> 11) * 2^-53                      in [0, 1)
///   index(n) = floor(uniform * n)                        one draw
///   normal   = sqrt(-2 ln(1 - u0)) * cos(2π u1)          two draws, u0 first
/// Any implementation following these rules reproduces the same stream.
class CounterRng {
 public:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  explicit CounterRng(std::uint64_t seed, std::uint64_t counter = 0)
      : seed_(seed), counter_(counter) {}

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Draw k of the stream, independent of the current position.
  std::uint64_t at(std::uint64_t k) const { return mix(seed_ + (k + 1) * kGamma); }

  std::uint64_t next_u64() { return at(counter_++); }

  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  std::size_t index(std::size_t n) {
    const auto i = static_cast<std::size_t>(uniform() * static_cast<double>(n));
    return i < n ? i : n - 1;
  }

  double normal() {
    const double u0 = uniform();
    const double u1 = uniform();
    return std::sqrt(-2.0 * std::log1p(-u0)) * std::cos(2.0 * std::numbers::pi * u1);
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }
  void seek(std::uint64_t counter) { counter_ = counter; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_;
};

}  // namespace accel
