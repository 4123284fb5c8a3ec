#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "isac/random.hpp"
#include "support.hpp"

using isac::RandomStream;

TEST_CASE("derived seeds are deterministic and key-sensitive") {
  CHECK(isac::derive_seed(7, {1, 2}) == isac::derive_seed(7, {1, 2}));
  CHECK(isac::derive_seed(7, {1, 2}) != isac::derive_seed(7, {2, 1}));
  CHECK(isac::derive_seed(7, {1, 2}) != isac::derive_seed(8, {1, 2}));
  CHECK(isac::derive_seed(7, {1}) != isac::derive_seed(7, {1, 0}));
  CHECK(isac::seed_key(0.0) == isac::seed_key(-0.0));
  CHECK(isac::seed_key(1e-3) != isac::seed_key(2e-3));
}

TEST_CASE("streams replay exactly") {
  RandomStream a(42), b(42);
  for (int i = 0; i < 1000; ++i) {
    REQUIRE(a.uniform() == b.uniform());
    REQUIRE(a.poisson(3.5) == b.poisson(3.5));
    REQUIRE(a.gamma(3.0, 1.0 / 3.0) == b.gamma(3.0, 1.0 / 3.0));
  }
}

TEST_CASE("uniform ranges") {
  RandomStream rng(1);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    const double v = rng.uniform_open();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    REQUIRE(v > 0.0);
    REQUIRE(v < 1.0);
  }
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 1000; ++i) {
    const auto k = rng.below(5);
    REQUIRE(k < 5);
    seen.insert(k);
  }
  CHECK(seen.size() == 5);
}

TEST_CASE("poisson draws match the pmf on both sampler branches") {
  // 14 uses inversion, 80 and 400 the rejection sampler.
  for (double mean : {0.7, 14.0, 49.9, 80.0, 400.0}) {
    CAPTURE(mean);
    RandomStream rng(isac::derive_seed(3, {static_cast<std::uint64_t>(mean * 10)}));
    std::vector<std::uint64_t> counts(100000);
    std::vector<double> as_double(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) {
      counts[i] = rng.poisson(mean);
      as_double[i] = static_cast<double>(counts[i]);
    }
    const auto chi = testsupport::poisson_chi_square(counts, mean);
    CAPTURE(chi.statistic);
    CAPTURE(chi.df);
    CHECK(chi.passes);
    const double se = std::sqrt(mean / static_cast<double>(counts.size()));
    CHECK(std::fabs(testsupport::mean_of(as_double) - mean) < 4.0 * se);
    CHECK(testsupport::variance_of(as_double) == doctest::Approx(mean).epsilon(0.03));
  }
  RandomStream rng(9);
  CHECK(rng.poisson(0.0) == 0);
}

TEST_CASE("exponential and gamma moments") {
  RandomStream rng(11);
  std::vector<double> e(200000), g(200000);
  for (auto& x : e) x = rng.exponential();
  for (auto& x : g) x = rng.gamma(2.5, 2.0);
  CHECK(testsupport::mean_of(e) == doctest::Approx(1.0).epsilon(0.01));
  CHECK(testsupport::variance_of(e) == doctest::Approx(1.0).epsilon(0.03));
  CHECK(testsupport::mean_of(g) == doctest::Approx(5.0).epsilon(0.01));
  CHECK(testsupport::variance_of(g) == doctest::Approx(10.0).epsilon(0.03));
}
