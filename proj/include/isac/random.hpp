#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace isac {

/// SplitMix64 finalizer; used to turn structured keys into well-mixed seeds.
std::uint64_t mix64(std::uint64_t x);

/// Folds a sequence of keys into a child seed of `master`. Distinct key
/// sequences give statistically independent streams.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> keys);

/// Seed key for a floating point coordinate (bit pattern, with -0.0 folded into 0.0).
std::uint64_t seed_key(double value);

/// A single random stream. Each Monte Carlo round, and each purpose within a
/// round, owns its own stream so results never depend on scheduling.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  static RandomStream derive(std::uint64_t master, std::initializer_list<std::uint64_t> keys) {
    return RandomStream(derive_seed(master, keys));
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on (0, 1).
  double uniform_open();
  double normal();
  /// Unit-mean exponential.
  double exponential();
  /// Gamma(shape, scale); mean shape * scale.
  double gamma(double shape, double scale);
  /// Poisson(mean) by sequential inversion below 50, PTRS rejection above.
  std::uint64_t poisson(double mean);
  /// Uniform integer on [0, n), n > 0.
  std::uint64_t below(std::uint64_t n);

 private:
  std::uint64_t poisson_inversion(double mean);
  std::uint64_t poisson_ptrs(double mean);

  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
  std::gamma_distribution<double> gamma_;
};

}  // namespace isac
