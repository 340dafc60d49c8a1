#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

// Counter-based random number generation. Every draw is a pure function of
// (seed, step, edge, salt), so trajectories are reproducible bit-for-bit and
// ensemble members can run in parallel without stream coordination.

namespace simplex_langevin {

// SplitMix64 finalizer. Statistically solid on sequential counters.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t step,
                                  std::uint32_t edge, std::uint32_t salt) {
  std::uint64_t h = mix64(seed ^ 0x6a09e667f3bcc909ULL);
  h = mix64(h ^ step);
  h = mix64(h ^ ((std::uint64_t(edge) << 32) | std::uint64_t(salt)));
  return h;
}

// Uniform in (0, 1]: never returns 0, safe under log().
inline double uniform_open(std::uint64_t bits) {
  return double((bits >> 11) + 1) * 0x1.0p-53;
}

// Two independent standard normals for one (step, edge) key via Box-Muller.
// Convention: .first feeds B_ij, .second feeds B_ji.
inline std::pair<double, double> normal_pair(std::uint64_t seed, std::uint64_t step,
                                             std::uint32_t edge, std::uint32_t salt = 0) {
  const std::uint64_t h = counter_hash(seed, step, edge, salt);
  const double u1 = uniform_open(h);
  const double u2 = uniform_open(mix64(h ^ 0x9e3779b97f4a7c15ULL));
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 6.283185307179586476925286766559 * u2;
  return {r * std::cos(a), r * std::sin(a)};
}

// Derived seed for ensemble member k.
inline std::uint64_t member_seed(std::uint64_t base_seed, std::uint64_t member) {
  return mix64(base_seed ^ mix64(member ^ 0x2545f4914f6cdd1dULL));
}

}  // namespace simplex_langevin
