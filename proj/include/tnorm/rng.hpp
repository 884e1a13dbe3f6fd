#pragma once

// Seeded random streams.
//
// Streams are xoshiro256** (Blackman & Vigna) seeded through SplitMix64.
// Independent streams are addressed by derive_seed(seed, tag, index), a
// SplitMix64-style hash, so parallel work items draw from fixed streams no
// matter how they are scheduled. Normal and uniform conversions are done
// here rather than with <random> distributions, whose output is not
// specified across standard libraries.

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <vector>

namespace tnorm {

inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag,
                                    std::uint64_t index = 0) noexcept {
  std::uint64_t h = mix64(seed + kGoldenGamma);
  h = mix64(h ^ (tag + 2 * kGoldenGamma));
  return mix64(h ^ (index + 3 * kGoldenGamma));
}

/// Stream tags. Values are part of the reproducibility contract.
namespace stream {
inline constexpr std::uint64_t kEntries = 1;
inline constexpr std::uint64_t kCoefficients = 2;
inline constexpr std::uint64_t kMeasurement = 3;
inline constexpr std::uint64_t kPositions = 4;
inline constexpr std::uint64_t kValues = 5;
inline constexpr std::uint64_t kTailTrial = 6;
inline constexpr std::uint64_t kRestart = 7;
inline constexpr std::uint64_t kTrial = 8;
inline constexpr std::uint64_t kEstimator = 9;
}  // namespace stream

class Xoshiro256 {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256(std::uint64_t seed) noexcept {
    std::uint64_t s = seed;
    for (auto& word : state_) {
      s += kGoldenGamma;
      word = mix64(s);
    }
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }
  std::array<std::uint64_t, 4> state_{};
};

using Rng = Xoshiro256;

/// Uniform on [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) noexcept {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform on {0, ..., n-1}, unbiased (rejection on the top of the range).
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) noexcept {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t r = 0;
  do {
    r = rng();
  } while (r >= limit);
  return r % n;
}

/// Standard normal by Box-Muller (cosine branch only).
inline double standard_normal(Rng& rng) noexcept {
  const double u1 = 1.0 - uniform01(rng);  // (0, 1]
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

/// Uniformly distributed point on S^{n-1}.
inline std::vector<double> random_unit_vector(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (double& e : v) {
      e = standard_normal(rng);
      norm2 += e * e;
    }
  } while (norm2 == 0.0);
  const double inv = 1.0 / std::sqrt(norm2);
  for (double& e : v) e *= inv;
  return v;
}

}  // namespace tnorm
