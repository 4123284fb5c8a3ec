#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "isac/config.hpp"
#include "isac/errors.hpp"

using namespace isac;

namespace {

ConfigError parse_error(std::string_view text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e;
  }
  FAIL("expected ConfigError for: " << text);
  return ConfigError("", "");
}

}  // namespace

TEST_CASE("empty file yields the defaults") {
  const auto p = parse_config_text("");
  const ScenarioConfig d;
  CHECK(p.scenario.region_radius_m == 1500.0);
  CHECK(p.scenario.uav_mean_count == 14.0);
  CHECK(p.scenario.bs_height_m == 50.0);
  CHECK(p.scenario.uav_capacity_cap_bps == 2e7);
  CHECK(to_config_text(p.scenario, std::nullopt) == to_config_text(d, std::nullopt));
  CHECK_FALSE(p.grid.has_value());
  CHECK(parse_config_text("# only a comment\n\n   \n").scenario.master_seed == d.master_seed);
}

TEST_CASE("values, comments and lists") {
  const auto p = parse_config_text(
      "uav_height_m = 200   # metres\n"
      "master_seed=7\n"
      "detection_threshold_dbm = -65.5\n"
      "sensing_target = nearest\n"
      "sweep_betas_per_m = 0.001, 0.004\n");
  CHECK(p.scenario.uav_height_m == 200.0);
  CHECK(p.scenario.master_seed == 7);
  REQUIRE(p.scenario.detection_threshold_dbm.has_value());
  CHECK(*p.scenario.detection_threshold_dbm == -65.5);
  CHECK(p.scenario.sensing_target == SensingTargetRule::Nearest);
  REQUIRE(p.grid.has_value());
  CHECK(p.grid->betas_per_m == std::vector<double>{0.001, 0.004});
  CHECK(p.grid->heights_m == SweepGrid::defaults().heights_m);
  CHECK_FALSE(parse_config_text("detection_threshold_dbm = auto").scenario.detection_threshold_dbm);

  const auto f = parse_config_text("carrier_frequency_hz = 3.5e9");
  CHECK(f.scenario.comm.carrier_frequency_hz == 3.5e9);
  CHECK(f.scenario.sensing.carrier_frequency_hz == 3.5e9);
}

TEST_CASE("text round trip") {
  ScenarioConfig c;
  c.hole_radius_m = 333.25;
  c.uav_beta_per_m = 1.0 / 3.0 * 1e-2;
  c.master_seed = 123456789012345ULL;
  c.detection_threshold_dbm = -71.125;
  SweepGrid g = SweepGrid::defaults();
  g.rounds_per_cell = 77;
  const std::string text = to_config_text(c, g);
  const auto p = parse_config_text(text);
  CHECK(to_config_text(p.scenario, p.grid) == text);
  CHECK(p.scenario.uav_beta_per_m == c.uav_beta_per_m);
  CHECK(p.grid->rounds_per_cell == 77);
  for (const auto& key : config_keys()) {
    CHECK(text.find(std::string(key.name) + " = ") != std::string::npos);
  }
}

TEST_CASE("hole outside the region is rejected with field and line") {
  const auto e = parse_error("uav_height_m = 150\nhole_radius_m = 2000\n");
  CHECK(e.field() == "hole_radius_m");
  CHECK(e.line() == 2);
  CHECK(std::string(e.what()).find("holeRadius < region.radius") != std::string::npos);
}

TEST_CASE("unknown key is named") {
  const auto e = parse_error("rounds = 10\nuav_hieght = 150\n");
  CHECK(e.field() == "uav_hieght");
  CHECK(e.line() == 2);
  CHECK(std::string(e.what()).find("uav_hieght") != std::string::npos);
  CHECK(std::string(e.what()).find("unknown key") != std::string::npos);
}

TEST_CASE("malformed input") {
  CHECK(parse_error("rounds = ten").field() == "rounds");
  CHECK(parse_error("rounds = -1").field() == "rounds");
  CHECK(parse_error("rounds = 0").field() == "rounds");
  CHECK(parse_error("just words").line() == 1);
  CHECK(parse_error("rounds = 5\nrounds = 6").message() == "duplicate key");
  CHECK(parse_error("sensing_target = furthest").field() == "sensing_target");
  CHECK(parse_error("nakagami_m_los = 0.4").field() == "nakagami_m_los");
  CHECK(parse_error("sweep_hole_radii_m = 0, x").field() == "sweep_hole_radii_m");
  CHECK(parse_error("sweep_hole_radii_m = 0, -5").field() == "sweep_hole_radii_m");
  CHECK(parse_error("target_pfa = 0").field() == "target_pfa");
}

TEST_CASE("missing file") {
  CHECK_THROWS_AS(parse_config("/nonexistent/isac.cfg"), ConfigError);
}
