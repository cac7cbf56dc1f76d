#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace canonica {

// mt19937_64 wrapper with pinned output transforms so that seeded runs
// reproduce bit-for-bit across standard library implementations (the
// std::*_distribution algorithms are not specified by the standard).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() {
    return double(eng_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller; one value per call, no caching.
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::acos(-1.0) * u2);
  }

 private:
  std::mt19937_64 eng_;
};

// Stream splitter: a decorrelated child seed for (seed, index).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace canonica
