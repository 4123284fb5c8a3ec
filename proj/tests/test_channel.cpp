#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "isac/channel.hpp"
#include "support.hpp"

using namespace isac;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

// Reference values, computed independently (Python, c = 299792458 m/s).
constexpr double kFreeSpaceRefDb = -38.468383135163;
constexpr double kLosSpotDbm = -48.468383135163;
constexpr double kBlockedSpotDbm = -88.468383135163;
constexpr double kBlockedHalfFadeDbm = -91.478683091803;
constexpr double kRadarSpotDbm = -111.5016816;

LinkGeometry flat(double d) { return LinkGeometry::from_offsets(d, 0.0, 0.0); }

}  // namespace

TEST_CASE("geometry") {
  const auto g = LinkGeometry::from_offsets(300.0, 400.0, -100.0);
  CHECK(g.horizontal_distance == doctest::Approx(500.0));
  CHECK(g.height_difference == doctest::Approx(100.0));
  CHECK(g.euclidean_distance == doctest::Approx(std::sqrt(260000.0)));
  CHECK(g.elevation_angle == doctest::Approx(std::atan(0.2)));
  CHECK(LinkGeometry::from_offsets(0.0, 0.0, 50.0).elevation_angle ==
        doctest::Approx(std::numbers::pi / 2));
}

TEST_CASE("reference gain and unit conversions") {
  CHECK(linear_to_db(free_space_reference_gain(2e9)) == doctest::Approx(kFreeSpaceRefDb).epsilon(1e-12));
  CHECK(dbm_to_watts(30.0) == doctest::Approx(1.0));
  CHECK(watts_to_dbm(1e-3) == doctest::Approx(0.0));
  CHECK(db_to_linear(20.0) == doctest::Approx(100.0));
  CHECK(inverse_power(10.0, 2.5) == doctest::Approx(std::pow(10.0, -2.5)));
  CHECK(inverse_power(7.0, 3.0) == doctest::Approx(std::pow(7.0, -3.0)));
}

TEST_CASE("link budget spot values") {
  CommChannelParams p;
  const double pt = dbm_to_watts(30.0);
  const auto g = flat(100.0);
  CHECK(watts_to_dbm(pt * path_gain(g, BlockageState::LoS, LinkKind::UavResident, p)) ==
        doctest::Approx(kLosSpotDbm).epsilon(1e-9));
  CHECK(watts_to_dbm(pt * path_gain(g, BlockageState::NLoS, LinkKind::UavResident, p)) ==
        doctest::Approx(kBlockedSpotDbm).epsilon(1e-9));
  CHECK(watts_to_dbm(instantaneous_received_power(pt, g, BlockageState::NLoS, 0.5,
                                                  LinkKind::UavResident, p)) ==
        doctest::Approx(kBlockedHalfFadeDbm).epsilon(1e-9));
  // fading = 1 on a certain-LoS link equals the LoS branch of the mean
  CHECK(instantaneous_received_power(pt, g, BlockageState::LoS, 1.0, LinkKind::UavResident, p) ==
        doctest::Approx(pt * path_gain(g, BlockageState::LoS, LinkKind::UavResident, p)));
  // BS links ignore blockage and use their own exponent
  CHECK(path_gain(g, BlockageState::NLoS, LinkKind::BsResident, p) ==
        doctest::Approx(free_space_reference_gain(2e9) * 1e-6));
  CHECK(instantaneous_received_power(2 * pt, g, BlockageState::LoS, 0.3, LinkKind::UavResident, p) ==
        doctest::Approx(2 * instantaneous_received_power(pt, g, BlockageState::LoS, 0.3,
                                                         LinkKind::UavResident, p)));
  CHECK_THROWS_AS(path_gain(flat(0.5), BlockageState::LoS, LinkKind::UavResident, p), std::domain_error);
  CHECK_THROWS_WITH(mean_received_power(pt, flat(0.9), LinkKind::UavResident, p),
                    "inside reference distance");
}

TEST_CASE("LoS probability sigmoid") {
  CommChannelParams p;
  CHECK(los_probability(90 * kDeg, p) == doctest::Approx(0.997716247081094).epsilon(1e-12));
  CHECK(los_probability(0.0, p) == doctest::Approx(0.02144991701177552).epsilon(1e-12));
  CHECK(los_probability(45 * kDeg, p) == doctest::Approx(0.7557740819386458).epsilon(1e-12));
  double prev = 0.0;
  for (int deg = 0; deg <= 90; ++deg) {
    const double v = los_probability(deg * kDeg, p);
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("blockage draws follow the LoS probability") {
  CommChannelParams p;
  RandomStream rng(3);
  const double theta = 20 * kDeg;
  const int n = 100000;
  int los = 0;
  for (int i = 0; i < n; ++i) los += sample_blockage(theta, p, rng) == BlockageState::LoS;
  const double q = los_probability(theta, p);
  CHECK(std::fabs(los / double(n) - q) < 3.0 * std::sqrt(q * (1 - q) / n));
}

TEST_CASE("Nakagami power fading moments") {
  for (double m : {1.0, 2.0, 3.0}) {
    CAPTURE(m);
    RandomStream rng(derive_seed(7, {seed_key(m)}));
    std::vector<double> x(1000000);
    for (auto& v : x) v = sample_fading_power(m, 1.0, rng);
    CHECK(testsupport::mean_of(x) == doctest::Approx(1.0).epsilon(0.01));
    CHECK(testsupport::variance_of(x) == doctest::Approx(1.0 / m).epsilon(0.02));
  }
  RandomStream rng(1);
  std::vector<double> x(200000);
  for (auto& v : x) v = sample_fading_power(2.0, 4.0, rng);
  CHECK(testsupport::mean_of(x) == doctest::Approx(4.0).epsilon(0.01));
  CHECK(testsupport::variance_of(x) == doctest::Approx(8.0).epsilon(0.03));
  CHECK_THROWS_WITH(sample_fading_power(0.4, 1.0, rng), "invalid Nakagami shape");
}

TEST_CASE("mean received power equals the average over blockage and fading") {
  CommChannelParams p;
  const double pt = dbm_to_watts(30.0);
  const auto g = LinkGeometry::from_offsets(180.0, 0.0, 150.0);
  RandomStream rng(13);
  const int n = 400000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto state = sample_blockage(g.elevation_angle, p, rng);
    const double fade = sample_fading_power(nakagami_shape(LinkKind::UavResident, state, p), 1.0, rng);
    sum += instantaneous_received_power(pt, g, state, fade, LinkKind::UavResident, p);
  }
  CHECK(sum / n == doctest::Approx(mean_received_power(pt, g, LinkKind::UavResident, p)).epsilon(0.01));
}

TEST_CASE("Gaussian beam and radar echo") {
  SensingChannelParams s;
  s.processing_gain_db = 0.0;
  const double sb = s.beam_std_rad;
  CHECK(beam_gain(0.0, sb) == 1.0);
  CHECK(beam_gain(3 * sb, sb) == doctest::Approx(std::exp(-4.5)));
  CHECK(beam_gain(3 * sb, sb) == doctest::Approx(0.0111).epsilon(0.005));
  CHECK(beam_gain(0.1, sb) > beam_gain(0.2, sb));

  const double pt = dbm_to_watts(40.0);
  CHECK(watts_to_dbm(radar_echo_power(pt, flat(200.0), 0.0, 1.0, s)) ==
        doctest::Approx(kRadarSpotDbm).epsilon(1e-8));
  CHECK(radar_echo_power(pt, flat(400.0), 0.0, 1.0, s) ==
        doctest::Approx(radar_echo_power(pt, flat(200.0), 0.0, 1.0, s) / 16.0));
  CHECK(radar_echo_power(pt, flat(200.0), 3 * sb, 1.0, s) ==
        doctest::Approx(radar_echo_power(pt, flat(200.0), 0.0, 1.0, s) * std::exp(-9.0)));
  CHECK_THROWS_AS(radar_echo_power(pt, flat(0.2), 0.0, 1.0, s), std::domain_error);

  SensingChannelParams boosted = s;
  boosted.processing_gain_db = 60.0;
  CHECK(radar_echo_power(pt, flat(200.0), 0.0, 1.0, boosted) ==
        doctest::Approx(1e6 * radar_echo_power(pt, flat(200.0), 0.0, 1.0, s)));
  // the gain applies to the echo only
  CHECK(sensing_interference_power(1.0, flat(300.0), 0.1, 1.0, boosted) ==
        sensing_interference_power(1.0, flat(300.0), 0.1, 1.0, s));
  CHECK(sensing_interference_power(1.0, flat(300.0), 0.0, 1.0, s) ==
        doctest::Approx(free_space_reference_gain(2e9) / 9e4));
}
