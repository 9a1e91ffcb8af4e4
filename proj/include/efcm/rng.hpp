#pragma once

#include <cstdint>
#include <random>

namespace efcm {

/// Single seedable stream backing every stochastic draw of a run.
///
/// All consumers pull from one stream in a documented order (deployment,
/// clustering initialization, then per-round protocol / fault / link draws),
/// so a run is fully reproducible from its seed.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : gen_(seed) {}

  /// Uniform double in [0, 1).
  double uniform01() {
    return std::uniform_real_distribution<double>(0.0, 1.0)(gen_);
  }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen_);
  }

  /// Uniform integer in [0, n).
  std::size_t index(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(gen_);
  }

  bool bernoulli(double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return uniform01() < p;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace efcm
