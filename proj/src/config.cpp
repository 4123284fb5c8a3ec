#include "isac/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <vector>

#include "isac/errors.hpp"

namespace isac {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view key, std::string_view text) {
  text = trim(text);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size() || text.empty()) {
    throw ConfigError(std::string(key), "expected a number, got '" + std::string(text) + "'");
  }
  return value;
}

std::uint64_t parse_unsigned(std::string_view key, std::string_view text) {
  text = trim(text);
  std::uint64_t value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size() || text.empty()) {
    throw ConfigError(std::string(key),
                      "expected a non-negative integer, got '" + std::string(text) + "'");
  }
  return value;
}

std::vector<double> parse_list(std::string_view key, std::string_view text) {
  std::vector<double> out;
  while (true) {
    const auto comma = text.find(',');
    out.push_back(parse_double(key, text.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

std::string format_list(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += format_number(values[i]);
  }
  return out;
}

using Setter = std::function<void(ParsedConfig&, std::string_view key, std::string_view value)>;
using Getter = std::function<std::string(const ScenarioConfig&, const SweepGrid&)>;

struct Entry {
  ConfigKey key;
  Setter set;
  Getter get;
  bool sweep = false;
};

template <typename Ref>
Entry real(std::string_view name, bool case_study, std::string_view description, Ref ref) {
  return {{name, case_study, description},
          [ref](ParsedConfig& c, std::string_view key, std::string_view v) {
            ref(c.scenario) = parse_double(key, v);
          },
          [ref](const ScenarioConfig& c, const SweepGrid&) {
            ScenarioConfig copy = c;
            return format_number(ref(copy));
          }};
}

template <typename Ref>
Entry count(std::string_view name, std::string_view description, Ref ref) {
  return {{name, false, description},
          [ref](ParsedConfig& c, std::string_view key, std::string_view v) {
            ref(c.scenario) = static_cast<std::remove_reference_t<decltype(ref(c.scenario))>>(
                parse_unsigned(key, v));
          },
          [ref](const ScenarioConfig& c, const SweepGrid&) {
            ScenarioConfig copy = c;
            return std::to_string(ref(copy));
          }};
}

template <typename Ref>
Entry axis(std::string_view name, std::string_view description, Ref ref) {
  return {{name, false, description},
          [ref](ParsedConfig& c, std::string_view key, std::string_view v) {
            if (!c.grid) c.grid = SweepGrid::defaults();
            ref(*c.grid) = parse_list(key, v);
          },
          [ref](const ScenarioConfig&, const SweepGrid& g) {
            SweepGrid copy = g;
            return format_list(ref(copy));
          },
          true};
}

const std::vector<Entry>& entries() {
  static const std::vector<Entry> table = [] {
    std::vector<Entry> t;
    t.push_back(real("region_radius_m", true, "radius of the served disk",
                     [](ScenarioConfig& c) -> double& { return c.region_radius_m; }));
    t.push_back(real("hole_radius_m", false, "UAV exclusion radius around the BS (horizontal)",
                     [](ScenarioConfig& c) -> double& { return c.hole_radius_m; }));
    t.push_back(real("bs_height_m", true, "BS antenna height",
                     [](ScenarioConfig& c) -> double& { return c.bs_height_m; }));
    t.push_back(real("uav_height_m", true, "UAV altitude",
                     [](ScenarioConfig& c) -> double& { return c.uav_height_m; }));
    t.push_back(real("uav_beta_per_m", false, "UAV non-homogeneity",
                     [](ScenarioConfig& c) -> double& { return c.uav_beta_per_m; }));
    t.push_back(real("resident_beta_per_m", false, "resident non-homogeneity",
                     [](ScenarioConfig& c) -> double& { return c.resident_beta_per_m; }));
    t.push_back(real("uav_mean_count", true, "expected number of UAVs",
                     [](ScenarioConfig& c) -> double& { return c.uav_mean_count; }));
    t.push_back(real("resident_mean_count", false, "expected number of residents",
                     [](ScenarioConfig& c) -> double& { return c.resident_mean_count; }));
    t.push_back(real("bs_tx_power_dbm", false, "BS downlink transmit power",
                     [](ScenarioConfig& c) -> double& { return c.bs_tx_power_dbm; }));
    t.push_back(real("uav_tx_power_dbm", false, "UAV downlink transmit power",
                     [](ScenarioConfig& c) -> double& { return c.uav_tx_power_dbm; }));
    t.push_back(real("sensing_tx_power_dbm", false, "BS sensing transmit power",
                     [](ScenarioConfig& c) -> double& { return c.sensing_tx_power_dbm; }));
    t.push_back(real("bandwidth_hz", false, "communication bandwidth",
                     [](ScenarioConfig& c) -> double& { return c.bandwidth_hz; }));
    t.push_back(real("noise_power_dbm", false, "receiver noise power over the bandwidth",
                     [](ScenarioConfig& c) -> double& { return c.noise_power_dbm; }));
    t.push_back(real("coverage_threshold_db", false, "SINR threshold for coverage",
                     [](ScenarioConfig& c) -> double& { return c.coverage_threshold_db; }));
    t.push_back(real("uav_capacity_cap_bps", true, "UAV capacity before shedding residents",
                     [](ScenarioConfig& c) -> double& { return c.uav_capacity_cap_bps; }));

    Entry carrier = real("carrier_frequency_hz", true, "carrier frequency (comm and sensing)",
                         [](ScenarioConfig& c) -> double& { return c.comm.carrier_frequency_hz; });
    carrier.set = [](ParsedConfig& c, std::string_view key, std::string_view v) {
      const double f = parse_double(key, v);
      c.scenario.comm.carrier_frequency_hz = f;
      c.scenario.sensing.carrier_frequency_hz = f;
    };
    t.push_back(std::move(carrier));

    t.push_back(real("los_path_loss_exponent", true, "UAV-resident exponent, LoS",
                     [](ScenarioConfig& c) -> double& { return c.comm.los_path_loss_exponent; }));
    t.push_back(real("nlos_path_loss_exponent", true, "UAV-resident exponent, blocked",
                     [](ScenarioConfig& c) -> double& { return c.comm.nlos_path_loss_exponent; }));
    t.push_back(real("nlos_extra_loss_db", true, "extra attenuation of blocked links",
                     [](ScenarioConfig& c) -> double& { return c.comm.nlos_extra_loss_db; }));
    t.push_back(real("nakagami_m_los", false, "Nakagami shape, LoS UAV links",
                     [](ScenarioConfig& c) -> double& { return c.comm.nakagami_m_los; }));
    t.push_back(real("nakagami_m_nlos", false, "Nakagami shape, blocked UAV links",
                     [](ScenarioConfig& c) -> double& { return c.comm.nakagami_m_nlos; }));
    t.push_back(real("bs_path_loss_exponent", false, "BS-resident exponent",
                     [](ScenarioConfig& c) -> double& { return c.comm.bs_path_loss_exponent; }));
    t.push_back(real("bs_nakagami_m", false, "Nakagami shape, BS links",
                     [](ScenarioConfig& c) -> double& { return c.comm.bs_nakagami_m; }));
    t.push_back(real("blockage_a", false, "LoS sigmoid parameter a",
                     [](ScenarioConfig& c) -> double& { return c.comm.blockage_a; }));
    t.push_back(real("blockage_b", false, "LoS sigmoid parameter b",
                     [](ScenarioConfig& c) -> double& { return c.comm.blockage_b; }));

    t.push_back(real("beam_std_rad", false, "Gaussian beam angular standard deviation",
                     [](ScenarioConfig& c) -> double& { return c.sensing.beam_std_rad; }));
    t.push_back(real("radar_cross_section_m2", false, "UAV radar cross section",
                     [](ScenarioConfig& c) -> double& { return c.sensing.radar_cross_section_m2; }));
    t.push_back(real("sensing_path_loss_exponent", false, "sensing exponent per one-way leg",
                     [](ScenarioConfig& c) -> double& { return c.sensing.path_loss_exponent; }));
    t.push_back(real("sensing_processing_gain_db", false, "matched-filter gain on the echo",
                     [](ScenarioConfig& c) -> double& { return c.sensing.processing_gain_db; }));

    t.push_back({{"sensing_target", false, "aligned UAV per round: uniform | nearest"},
                 [](ParsedConfig& c, std::string_view key, std::string_view v) {
                   v = trim(v);
                   if (v == "uniform") {
                     c.scenario.sensing_target = SensingTargetRule::UniformRandom;
                   } else if (v == "nearest") {
                     c.scenario.sensing_target = SensingTargetRule::Nearest;
                   } else {
                     throw ConfigError(std::string(key), "expected 'uniform' or 'nearest'");
                   }
                 },
                 [](const ScenarioConfig& c, const SweepGrid&) {
                   return std::string(c.sensing_target == SensingTargetRule::Nearest ? "nearest"
                                                                                      : "uniform");
                 }});
    t.push_back({{"detection_threshold_dbm", false, "sensing threshold, or 'auto' to calibrate"},
                 [](ParsedConfig& c, std::string_view key, std::string_view v) {
                   if (trim(v) == "auto") {
                     c.scenario.detection_threshold_dbm.reset();
                   } else {
                     c.scenario.detection_threshold_dbm = parse_double(key, v);
                   }
                 },
                 [](const ScenarioConfig& c, const SweepGrid&) {
                   return c.detection_threshold_dbm ? format_number(*c.detection_threshold_dbm)
                                                    : std::string("auto");
                 }});
    t.push_back(real("target_pfa", false, "false-alarm target for calibration",
                     [](ScenarioConfig& c) -> double& { return c.target_pfa; }));
    t.push_back(count("master_seed", "master random seed",
                      [](ScenarioConfig& c) -> std::uint64_t& { return c.master_seed; }));
    t.push_back(count("rounds", "Monte Carlo rounds for single runs",
                      [](ScenarioConfig& c) -> std::size_t& { return c.rounds; }));
    t.push_back(count("calibration_rounds", "pilot rounds for threshold calibration",
                      [](ScenarioConfig& c) -> std::size_t& { return c.calibration_rounds; }));

    t.push_back(axis("sweep_heights_m", "UAV heights of the sweep grid",
                     [](SweepGrid& g) -> std::vector<double>& { return g.heights_m; }));
    t.push_back(axis("sweep_hole_radii_m", "hole radii of the sweep grid",
                     [](SweepGrid& g) -> std::vector<double>& { return g.hole_radii_m; }));
    t.push_back(axis("sweep_betas_per_m", "non-homogeneity values of the sweep grid",
                     [](SweepGrid& g) -> std::vector<double>& { return g.betas_per_m; }));
    t.push_back({{"sweep_rounds_per_cell", false, "Monte Carlo rounds per grid cell"},
                 [](ParsedConfig& c, std::string_view key, std::string_view v) {
                   if (!c.grid) c.grid = SweepGrid::defaults();
                   c.grid->rounds_per_cell = parse_unsigned(key, v);
                 },
                 [](const ScenarioConfig&, const SweepGrid& g) {
                   return std::to_string(g.rounds_per_cell);
                 },
                 true});
    return t;
  }();
  return table;
}

std::vector<ConfigKey> key_list() {
  std::vector<ConfigKey> keys;
  for (const auto& e : entries()) keys.push_back(e.key);
  return keys;
}

}  // namespace

std::span<const ConfigKey> config_keys() {
  static const std::vector<ConfigKey> keys = key_list();
  return keys;
}

ParsedConfig parse_config_text(std::string_view text) {
  ParsedConfig parsed;
  std::map<std::string, int, std::less<>> seen;
  int line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("", "expected 'key = value', got '" + std::string(line) + "'", line_no);
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    const auto& table = entries();
    const auto it = std::find_if(table.begin(), table.end(),
                                 [&](const Entry& e) { return e.key.name == key; });
    if (it == table.end()) throw ConfigError(key, "unknown key", line_no);
    if (!seen.emplace(key, line_no).second) throw ConfigError(key, "duplicate key", line_no);
    try {
      it->set(parsed, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(e.field(), e.message(), line_no);
    }
  }

  try {
    parsed.scenario.validate();
    if (parsed.grid) parsed.grid->validate();
  } catch (const ConfigError& e) {
    const auto line = seen.find(e.field());
    throw ConfigError(e.field(), e.message(), line == seen.end() ? 0 : line->second);
  }
  return parsed;
}

ParsedConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

std::string to_config_text(const ScenarioConfig& config, const std::optional<SweepGrid>& grid) {
  std::string out;
  const SweepGrid g = grid.value_or(SweepGrid{});
  for (const auto& e : entries()) {
    if (e.sweep && !grid) continue;
    out += e.key.name;
    out += " = ";
    out += e.get(config, g);
    out += '\n';
  }
  return out;
}

}  // namespace isac
