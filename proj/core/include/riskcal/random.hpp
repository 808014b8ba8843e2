#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

// Deterministic randomness contract.
//
// All sampling in this library is driven by xoshiro256++ seeded through
// SplitMix64, and every derived stream is obtained with derive_trial_seed.
// The exact algorithms are pinned here so that independent ports can
// reproduce experiment streams bit for bit:
//
//   splitmix64_mix(z):   z ^= z >> 30; z *= 0xBF58476D1CE4E5B9;
//                        z ^= z >> 27; z *= 0x94D049BB133111EB;
//                        z ^= z >> 31
//   derive_trial_seed(s, k) = splitmix64_mix(s + (k + 1) * 0x9E3779B97F4A7C15)
//   xoshiro256++ state[i]   = splitmix64_mix(seed + (i + 1) * 0x9E3779B97F4A7C15)
//   uniform in [0, 1)       = (next() >> 11) * 2^-53
//   standard exponential    = -log1p(-uniform())
//   standard normal         = Box-Muller, two uniforms per call, no caching:
//                             sqrt(-2 log(1 - u1)) * cos(2 pi u2)

namespace riskcal {

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

/// SplitMix64 output function (Steele, Lea & Flood). Bijective on 64-bit words.
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Pure counter-based seed derivation: the k-th output of the SplitMix64
/// stream started at `master_seed`. Distinct indices give distinct seeds
/// because the increment is odd and the mix is a bijection.
constexpr std::uint64_t derive_trial_seed(std::uint64_t master_seed, std::uint64_t index) noexcept {
  return splitmix64_mix(master_seed + (index + 1) * kGoldenGamma);
}

/// xoshiro256++ (Blackman & Vigna 2019), seeded from a single 64-bit value
/// via SplitMix64 as recommended by the authors.
class Xoshiro256pp {
 public:
  using result_type = std::uint64_t;

  explicit constexpr Xoshiro256pp(std::uint64_t seed) noexcept : state_{} {
    for (std::size_t i = 0; i < state_.size(); ++i) {
      state_[i] = splitmix64_mix(seed + (static_cast<std::uint64_t>(i) + 1) * kGoldenGamma);
    }
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  constexpr result_type operator()() noexcept {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Standard exponential variate via inverse CDF.
  double exponential() noexcept { return -std::log1p(-uniform()); }

  /// Standard normal variate. Consumes exactly two uniforms so that stream
  /// positions stay reproducible; the second Box-Muller value is discarded.
  double normal() noexcept {
    const double u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log1p(-u1));
    return radius * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_;
};

}  // namespace riskcal
