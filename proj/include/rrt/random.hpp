#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <limits>

namespace rrt {

/// SplitMix64 finalizer. Used both for seeding and for counter-based stream
/// derivation, so consecutive counters map to uncorrelated 64-bit keys.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// xoshiro256** generator. Satisfies UniformRandomBitGenerator.
///
/// Every replicate of a Monte Carlo run owns one Stream, keyed by
/// (root_seed, replicate index) through derive_stream(). The state is four
/// words, so constructing one per replicate is cheap.
class Stream {
 public:
  using result_type = std::uint64_t;

  explicit Stream(std::uint64_t seed) noexcept {
    std::uint64_t x = seed;
    for (auto& w : state_) {
      x = mix64(x);
      w = x;
    }
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    const std::uint64_t result = std::rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = std::rotl(state_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in {0, ..., bound-1}. Rejection against the next power
  /// of two, so there is no modulo bias. bound must be >= 1.
  std::uint64_t uniform_below(std::uint64_t bound) noexcept {
    if (bound <= 1) return 0;
    const int bits = std::bit_width(bound - 1);
    const int shift = 64 - bits;
    for (;;) {
      const std::uint64_t r = (*this)() >> shift;
      if (r < bound) return r;
    }
  }

  /// Standard exponential variate via inversion of 1 - U, U in [0,1).
  double exponential() noexcept;

 private:
  std::array<std::uint64_t, 4> state_{};
};

/// Stream for replicate `index` of a run keyed by `root_seed`. Depends only
/// on the pair, never on scheduling.
inline Stream derive_stream(std::uint64_t root_seed, std::uint64_t index) noexcept {
  return Stream(mix64(root_seed ^ mix64(index + 0x632be59bd9b4e019ULL)));
}

}  // namespace rrt
