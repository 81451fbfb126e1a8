#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace ttdbt {

// Mixes a value into a seed, splitmix64-style. Used to derive independent
// per-value / per-trial streams from one base seed so that results do not
// depend on scheduling or thread count.
inline std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t value) {
  std::uint64_t x = seed + 0x9e3779b97f4a7c15ULL * (value + 1);
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic random generator with fixed, documented draw semantics.
//
// std::normal_distribution is implementation-defined (libstdc++ and libc++
// disagree, and both may cache), which would break the bit-reproducibility
// contract of the sweep harness. This class therefore fixes the algorithms:
//   uniform():  next mt19937_64 word, top 53 bits -> [0, 1)
//   normal():   Box-Muller, exactly two engine words per call, no caching
//   cnormal():  one Box-Muller pair -> circularly symmetric complex normal
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal draw; consumes exactly two engine words.
  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]: keeps log() finite
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  // Circularly symmetric complex normal with E|z|^2 = variance.
  // Consumes exactly two engine words (one full Box-Muller pair).
  std::complex<double> cnormal(double variance) {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-std::log(u1) * variance);
    const double a = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(a), r * std::sin(a)};
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ttdbt
