#include "isac/cli.hpp"

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <string>

#include "isac/config.hpp"
#include "isac/errors.hpp"
#include "isac/mcengine.hpp"
#include "isac/sweep.hpp"

namespace isac {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void write_calibration(const std::filesystem::path& dir, const ScenarioConfig& config,
                       double threshold_w) {
  std::filesystem::create_directories(dir);
  const auto path = dir / "calibration.json";
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  const nlohmann::json doc = {
      {"code_version", code_version()},
      {"master_seed", config.master_seed},
      {"pilot_seed", pilot_seed(config.master_seed)},
      {"pilot_rounds", config.calibration_rounds},
      {"target_pfa", config.target_pfa},
      {"detection_threshold_w", threshold_w},
      {"detection_threshold_dbm", watts_to_dbm(threshold_w)},
      {"config_text", to_config_text(config, std::nullopt)},
  };
  out << doc.dump(2) << '\n';
}

int execute(const RunSpec& spec) {
  ParsedConfig parsed;
  try {
    if (spec.config_path) parsed = parse_config(*spec.config_path);
    if (spec.seed_override) parsed.scenario.master_seed = *spec.seed_override;
    if (spec.rounds_override) {
      parsed.scenario.rounds = *spec.rounds_override;
      if (parsed.grid) parsed.grid->rounds_per_cell = *spec.rounds_override;
    }
    if (spec.parallelism < 1) throw ConfigError("parallelism", "must be >= 1");
    parsed.scenario.validate();
  } catch (const ConfigError& e) {
    spdlog::error("config error: {}", e.what());
    return kExitConfigError;
  }

  const ScenarioConfig& config = parsed.scenario;
  const auto start = std::chrono::steady_clock::now();
  switch (spec.mode) {
    case RunMode::Single: {
      spdlog::info("single run: {} rounds, seed {}", config.rounds, config.master_seed);
      SweepResult result;
      result.master_seed = config.master_seed;
      result.detection_threshold_w = resolve_threshold(config, spec.parallelism);
      result.rows.push_back(run_cell(config, result.detection_threshold_w, spec.parallelism));
      const auto& m = result.rows.front().metrics;
      spdlog::info("coverage {:.4f} throughput {:.4g} bit/s pd {:.4f} pfa {:.4f} asp {:.4f}",
                   m.coverage.mean, m.throughput.mean, m.pd.mean, m.pfa.mean, m.asp.mean);
      emit_results(result, {"single", config, std::nullopt, seconds_since(start), spec.parallelism},
                   spec.output_dir);
      break;
    }
    case RunMode::Sweep: {
      SweepGrid grid = parsed.grid.value_or(SweepGrid::defaults());
      if (spec.rounds_override) grid.rounds_per_cell = *spec.rounds_override;
      const auto result = run_sweep(grid, config, {spec.parallelism, std::nullopt});
      for (double h : grid.heights_m) {
        try {
          const auto best = argmax_cell(result, "asp", h);
          spdlog::info("asp argmax at h={} m: hole={} m beta={} /m asp={:.4f}", h,
                       best.cell.hole_radius_m, best.cell.beta_per_m, best.value);
        } catch (const std::invalid_argument&) {
          spdlog::warn("no valid cells at h={} m", h);
        }
      }
      emit_results(result, {"sweep", config, grid, seconds_since(start), spec.parallelism},
                   spec.output_dir);
      break;
    }
    case RunMode::Calibrate: {
      const double tau = calibrate_threshold(config, config.target_pfa, spec.parallelism);
      spdlog::info("calibrated threshold {:.6g} W ({:.4f} dBm) for pfa {}", tau,
                   watts_to_dbm(tau), config.target_pfa);
      write_calibration(spec.output_dir, config, tau);
      std::cout << format_number(watts_to_dbm(tau)) << '\n';
      break;
    }
  }
  spdlog::info("done in {:.2f} s; outputs in {}", seconds_since(start), spec.output_dir.string());
  return kExitOk;
}

}  // namespace

std::optional<RunMode> parse_run_mode(std::string_view text) {
  if (text == "single") return RunMode::Single;
  if (text == "sweep") return RunMode::Sweep;
  if (text == "calibrate") return RunMode::Calibrate;
  return std::nullopt;
}

void configure_logging() {
  auto logger = spdlog::get("isac_sim");
  if (!logger) logger = spdlog::stderr_color_mt("isac_sim");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%H:%M:%S.%e] [%l] %v");
  const char* env = std::getenv("ISAC_SIM_LOG");
  const std::string level = env ? env : "info";
  if (level == "error") {
    spdlog::set_level(spdlog::level::err);
  } else if (level == "debug") {
    spdlog::set_level(spdlog::level::debug);
  } else {
    if (level != "info") spdlog::warn("ISAC_SIM_LOG='{}' not recognized; using info", level);
    spdlog::set_level(spdlog::level::info);
  }
}

int main_run(const RunSpec& spec) {
  try {
    return execute(spec);
  } catch (const ConfigError& e) {
    spdlog::error("config error: {}", e.what());
    return kExitConfigError;
  } catch (const std::exception& e) {
    spdlog::error("runtime error: {}", e.what());
    return kExitRuntimeError;
  }
}

}  // namespace isac
