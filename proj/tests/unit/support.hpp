#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace tabs::test {

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

// Seeded so every run draws the same cases.
inline std::mt19937_64 rng(std::uint64_t seed = 20261015) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& g, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(g);
}

}  // namespace tabs::test
