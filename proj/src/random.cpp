#include "isac/random.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace isac {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> keys) {
  std::uint64_t state = mix64(master);
  for (std::uint64_t key : keys) {
    state = mix64(state ^ mix64(key + 0x632be59bd9b4e019ULL));
  }
  return state;
}

std::uint64_t seed_key(double value) {
  if (value == 0.0) value = 0.0;
  return std::bit_cast<std::uint64_t>(value);
}

RandomStream::RandomStream(std::uint64_t seed) : engine_(seed) {}

double RandomStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform_open() {
  return (static_cast<double>(engine_() >> 12) + 0.5) * 0x1.0p-52;
}

double RandomStream::normal() { return normal_(engine_); }

double RandomStream::exponential() { return -std::log(uniform_open()); }

double RandomStream::gamma(double shape, double scale) {
  using param = std::gamma_distribution<double>::param_type;
  return gamma_(engine_, param(shape, scale));
}

std::uint64_t RandomStream::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("RandomStream::below: empty range");
  // Reject the top partial block so every residue is equally likely.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t draw;
  do {
    draw = engine_();
  } while (draw >= limit);
  return draw % n;
}

std::uint64_t RandomStream::poisson(double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) {
    throw std::invalid_argument("Poisson mean must be finite and non-negative");
  }
  if (mean == 0.0) return 0;
  return mean < 50.0 ? poisson_inversion(mean) : poisson_ptrs(mean);
}

std::uint64_t RandomStream::poisson_inversion(double mean) {
  const double u = uniform();
  double pmf = std::exp(-mean);
  double cdf = pmf;
  std::uint64_t k = 0;
  // The cap only matters when rounding keeps the summed cdf below u.
  const auto cap = static_cast<std::uint64_t>(mean + 40.0 * std::sqrt(mean) + 100.0);
  while (u > cdf && k < cap) {
    ++k;
    pmf *= mean / static_cast<double>(k);
    cdf += pmf;
  }
  return k;
}

// Hormann's transformed rejection with squeeze (PTRS).
std::uint64_t RandomStream::poisson_ptrs(double mean) {
  const double slam = std::sqrt(mean);
  const double loglam = std::log(mean);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = uniform_open() - 0.5;
    const double v = uniform_open();
    const double us = 0.5 - std::fabs(u);
    const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= vr) return static_cast<std::uint64_t>(k);
    if (k < 0.0 || (us < 0.013 && v > us)) continue;
    const double lhs = std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b);
    const double rhs = -mean + k * loglam - std::lgamma(k + 1.0);
    if (lhs <= rhs) return static_cast<std::uint64_t>(k);
  }
}

}  // namespace isac
