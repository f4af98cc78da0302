#pragma once

#include <algorithm>
#include <cstdint>
#include <cmath>
#include <random>
#include <vector>

namespace qcm::gen {

inline constexpr int kTrials = 200;

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::exp(uniform(rng, std::log(lo), std::log(hi)));
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline std::vector<double> random_vector(std::mt19937_64& rng, std::size_t size, double lo,
                                         double hi) {
  std::vector<double> v(size);
  for (auto& x : v) x = uniform(rng, lo, hi);
  return v;
}

/// Positive nonincreasing weights.
inline std::vector<double> random_weights(std::mt19937_64& rng, std::size_t size) {
  auto v = random_vector(rng, size, 0.01, 1.0);
  std::sort(v.begin(), v.end(), std::greater<>());
  return v;
}

}  // namespace qcm::gen
