#pragma once

// Seeded, platform-independent randomness. The standard distributions are
// implementation-defined, so uniform and normal variates are derived from the
// raw 64-bit engine output here.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string_view>

#include "setsp/powerset.hpp"

namespace setsp {

using Rng = std::mt19937_64;
inline constexpr std::string_view kRngAlgorithm = "mt19937_64";

// Uniform in [0, 1).
[[nodiscard]] inline double uniform01(Rng &rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

[[nodiscard]] inline double uniform(Rng &rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

// Uniform integer in [0, bound), bound > 0, by rejection.
[[nodiscard]] inline std::uint64_t uniform_index(Rng &rng,
                                                 std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  while (true) {
    const std::uint64_t r = rng();
    if (r < limit)
      return r % bound;
  }
}

// Standard normal via Box-Muller (one variate per call).
[[nodiscard]] inline double standard_normal(Rng &rng) {
  double u1 = uniform01(rng);
  while (u1 <= 0.0)
    u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

// Uniform random subset of the ground set.
[[nodiscard]] inline mask_t random_subset(Rng &rng, const GroundSet &g) {
  return rng() & g.full_mask();
}

[[nodiscard]] inline double random_sign(Rng &rng) {
  return (rng() >> 63) ? -1.0 : 1.0;
}

// Log-uniform magnitude in [lo, hi].
[[nodiscard]] inline double log_uniform(Rng &rng, double lo, double hi) {
  return std::exp(uniform(rng, std::log(lo), std::log(hi)));
}

} // namespace setsp
