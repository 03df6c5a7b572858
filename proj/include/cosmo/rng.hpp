#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace cosmo {

/// Seeded random source. Draws are built from raw mt19937_64 output with
/// fixed formulas, so a seed reproduces the same values on every standard
/// library (std::*_distribution is implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on (0, 1), never exactly zero.
  double uniform_open();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);
  bool coin() { return (next_u64() >> 63) != 0; }

  /// Standard normal (Marsaglia polar method, second variate cached).
  double normal();
  double normal(double mean, double stddev) { return mean + stddev * normal(); }
  /// Exponential with rate 1.
  double exponential();
  /// Gumbel with location 0 and scale 1.
  double gumbel();

  /// Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(values[i - 1], values[j]);
    }
  }

  std::vector<std::size_t> permutation(std::size_t n);

 private:
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

/// splitmix64 finalizer; used to derive independent child seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace cosmo
