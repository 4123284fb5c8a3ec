#include "isac/sweep.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <stdexcept>
#include <system_error>

#include "isac/config.hpp"
#include "isac/errors.hpp"

#ifndef ISAC_VERSION
#define ISAC_VERSION "unknown"
#endif

namespace isac {

namespace {

constexpr std::uint64_t kCellKey = 0x63656c6cULL;  // "cell"

void check_axis(const std::vector<double>& axis, const char* name, double min_value) {
  if (axis.empty()) throw ConfigError(name, "sweep axis must not be empty");
  for (double v : axis) {
    if (!std::isfinite(v) || v < min_value) {
      throw ConfigError(name, "value " + format_number(v) + " out of range");
    }
  }
}

void append_metric(std::string& out, const MetricEstimate& m) {
  out += ',';
  out += format_number(m.mean);
  out += ',';
  out += format_number(m.ci95_low);
  out += ',';
  out += format_number(m.ci95_high);
}

MetricEstimate read_metric(std::string name, const std::array<double, 20>& f, std::size_t at) {
  return {std::move(name), f[at], f[at + 1], f[at + 2], 0};
}

nlohmann::json cell_json(const CellCoordinates& c) {
  return {{"height_m", c.height_m}, {"hole_radius_m", c.hole_radius_m}, {"beta_per_m", c.beta_per_m}};
}

}  // namespace

SweepGrid SweepGrid::defaults() {
  SweepGrid g;
  g.heights_m = {100.0, 150.0, 200.0, 300.0};
  g.hole_radii_m = {0.0, 100.0, 200.0, 300.0, 400.0, 500.0};
  g.betas_per_m = {0.5e-3, 1e-3, 2e-3, 4e-3, 8e-3};
  g.rounds_per_cell = 10000;
  return g;
}

void SweepGrid::validate() const {
  check_axis(heights_m, "sweep_heights_m", 1.0);
  check_axis(hole_radii_m, "sweep_hole_radii_m", 0.0);
  check_axis(betas_per_m, "sweep_betas_per_m", 0.0);
  if (rounds_per_cell == 0) throw ConfigError("sweep_rounds_per_cell", "must be > 0");
}

std::uint64_t cell_seed(std::uint64_t master_seed, const CellCoordinates& cell) {
  return derive_seed(master_seed, {kCellKey, seed_key(cell.height_m), seed_key(cell.hole_radius_m),
                                   seed_key(cell.beta_per_m)});
}

ScenarioConfig cell_config(const ScenarioConfig& base, const CellCoordinates& cell,
                           std::size_t rounds) {
  ScenarioConfig c = base;
  c.uav_height_m = cell.height_m;
  c.hole_radius_m = cell.hole_radius_m;
  c.uav_beta_per_m = cell.beta_per_m;
  c.rounds = rounds;
  c.master_seed = cell_seed(base.master_seed, cell);
  return c;
}

SweepRow run_cell(const ScenarioConfig& config, double threshold_w, int parallelism) {
  config.validate();
  const auto results = run_rounds(config, 0, config.rounds, parallelism);
  SweepRow row;
  row.cell = {config.uav_height_m, config.hole_radius_m, config.uav_beta_per_m};
  row.metrics = summarize(results, config, threshold_w);
  row.rounds = config.rounds;
  row.seed = config.master_seed;
  return row;
}

SweepResult run_sweep(const SweepGrid& grid, const ScenarioConfig& base,
                      const SweepOptions& options) {
  grid.validate();
  base.validate();

  SweepResult result;
  result.master_seed = base.master_seed;
  result.detection_threshold_w =
      options.threshold_w ? *options.threshold_w : resolve_threshold(base, options.parallelism);
  spdlog::info("sweep: {} cells x {} rounds, threshold {:.6g} dBm", grid.cell_count(),
               grid.rounds_per_cell, watts_to_dbm(result.detection_threshold_w));

  std::size_t index = 0;
  for (double h : grid.heights_m) {
    for (double hole : grid.hole_radii_m) {
      for (double beta : grid.betas_per_m) {
        ++index;
        const CellCoordinates cell{h, hole, beta};
        const auto skip = [&](std::string reason) {
          spdlog::warn("cell h={} hole={} beta={} skipped: {}", h, hole, beta, reason);
          result.failed.push_back({cell, std::move(reason)});
        };
        try {
          const auto config = cell_config(base, cell, grid.rounds_per_cell);
          result.rows.push_back(run_cell(config, result.detection_threshold_w, options.parallelism));
          spdlog::debug("cell {}/{} h={} hole={} beta={} asp={:.4f}", index, grid.cell_count(), h,
                        hole, beta, result.rows.back().metrics.asp.mean);
        } catch (const DegenerateRegionError& e) {
          skip(e.what());
        } catch (const ConfigError& e) {
          if (e.field() != "hole_radius_m") throw;
          skip("degenerate region: " + e.message());
        }
      }
    }
    spdlog::info("sweep: height {} m done ({}/{} cells)", h, index, grid.cell_count());
  }
  return result;
}

const MetricEstimate& metric_by_name(const MetricSummary& summary, std::string_view metric) {
  if (metric == "coverage") return summary.coverage;
  if (metric == "throughput") return summary.throughput;
  if (metric == "pd") return summary.pd;
  if (metric == "pfa") return summary.pfa;
  if (metric == "asp") return summary.asp;
  throw std::invalid_argument("unknown metric '" + std::string(metric) + "'");
}

ArgmaxCell argmax_cell(const SweepResult& result, std::string_view metric,
                       std::optional<double> height_m) {
  std::optional<ArgmaxCell> best;
  for (const auto& row : result.rows) {
    if (height_m && row.cell.height_m != *height_m) continue;
    const double v = metric_by_name(row.metrics, metric).mean;
    if (!best || v > best->value || (v == best->value && row.cell < best->cell)) {
      best = ArgmaxCell{row.cell, v};
    }
  }
  if (!best) {
    // Validates the name even on empty input.
    metric_by_name(MetricSummary{}, metric);
    throw std::invalid_argument("argmax_cell: no rows to search");
  }
  return *best;
}

std::string format_number(double value) {
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) throw std::runtime_error("format_number: conversion failed");
  return std::string(buf.data(), end);
}

std::string format_csv(const SweepResult& result) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& row : result.rows) {
    out += format_number(row.cell.height_m);
    out += ',';
    out += format_number(row.cell.hole_radius_m);
    out += ',';
    out += format_number(row.cell.beta_per_m);
    append_metric(out, row.metrics.coverage);
    append_metric(out, row.metrics.throughput);
    append_metric(out, row.metrics.pd);
    append_metric(out, row.metrics.pfa);
    append_metric(out, row.metrics.asp);
    out += ',';
    out += std::to_string(row.rounds);
    out += ',';
    out += std::to_string(row.seed);
    out += '\n';
  }
  return out;
}

std::vector<SweepRow> parse_csv(std::string_view text) {
  auto next_line = [&text]() {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    return line;
  };
  if (next_line() != kCsvHeader) throw std::runtime_error("CSV header does not match schema");

  std::vector<SweepRow> rows;
  while (!text.empty()) {
    std::string_view line = next_line();
    if (line.empty()) continue;
    std::array<double, 20> fields{};
    std::uint64_t rounds = 0;
    std::uint64_t seed = 0;
    for (std::size_t i = 0; i < fields.size(); ++i) {
      const auto comma = line.find(',');
      const std::string_view cell = line.substr(0, comma);
      std::from_chars_result r{};
      if (i == 18) {
        r = std::from_chars(cell.data(), cell.data() + cell.size(), rounds);
      } else if (i == 19) {
        r = std::from_chars(cell.data(), cell.data() + cell.size(), seed);
      } else {
        r = std::from_chars(cell.data(), cell.data() + cell.size(), fields[i]);
      }
      if (r.ec != std::errc{} || r.ptr != cell.data() + cell.size() || cell.empty()) {
        throw std::runtime_error("CSV: malformed field " + std::to_string(i + 1));
      }
      if ((comma == std::string_view::npos) != (i == fields.size() - 1)) {
        throw std::runtime_error("CSV: expected 20 fields per row");
      }
      line.remove_prefix(comma == std::string_view::npos ? line.size() : comma + 1);
    }
    SweepRow row;
    row.cell = {fields[0], fields[1], fields[2]};
    row.metrics.coverage = read_metric("coverage", fields, 3);
    row.metrics.throughput = read_metric("throughput", fields, 6);
    row.metrics.pd = read_metric("pd", fields, 9);
    row.metrics.pfa = read_metric("pfa", fields, 12);
    row.metrics.asp = read_metric("asp", fields, 15);
    row.rounds = rounds;
    row.seed = seed;
    rows.push_back(row);
  }
  return rows;
}

std::string code_version() { return ISAC_VERSION; }

void emit_results(const SweepResult& result, const RunRecord& record,
                  const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + dir.string() + "': " + ec.message());

  const auto csv_path = dir / "results.csv";
  {
    std::ofstream csv(csv_path, std::ios::binary);
    if (!csv) throw std::runtime_error("cannot open '" + csv_path.string() + "' for writing");
    csv << format_csv(result);
    if (!csv) throw std::runtime_error("write failed for '" + csv_path.string() + "'");
  }

  nlohmann::json parameters = nlohmann::json::array();
  const std::string text = to_config_text(record.config, record.grid);
  for (const auto& key : config_keys()) {
    const auto at = text.find(std::string(key.name) + " = ");
    if (at == std::string::npos) continue;
    const auto start = at + key.name.size() + 3;
    parameters.push_back({{"key", key.name},
                          {"value", text.substr(start, text.find('\n', start) - start)},
                          {"provenance", key.case_study_default ? "case-study" : "assumed"},
                          {"description", key.description}});
  }

  nlohmann::json failed = nlohmann::json::array();
  for (const auto& f : result.failed) {
    auto j = cell_json(f.cell);
    j["reason"] = f.reason;
    failed.push_back(j);
  }

  nlohmann::json argmax = nlohmann::json::array();
  std::vector<double> heights;
  for (const auto& row : result.rows) {
    if (std::find(heights.begin(), heights.end(), row.cell.height_m) == heights.end()) {
      heights.push_back(row.cell.height_m);
    }
  }
  for (double h : heights) {
    const auto best = argmax_cell(result, "asp", h);
    auto j = cell_json(best.cell);
    j["asp"] = best.value;
    argmax.push_back(j);
  }

  const nlohmann::json manifest = {
      {"code_version", code_version()},
      {"mode", record.mode},
      {"master_seed", result.master_seed},
      {"parallelism", record.parallelism},
      {"wall_seconds", record.wall_seconds},
      {"detection_threshold_w", result.detection_threshold_w},
      {"detection_threshold_dbm", watts_to_dbm(result.detection_threshold_w)},
      {"results_csv", "results.csv"},
      {"rows", result.rows.size()},
      {"failed_cells", failed},
      {"asp_argmax_by_height", argmax},
      {"config_text", text},
      {"parameters", parameters},
  };

  const auto manifest_path = dir / "manifest.json";
  std::ofstream out(manifest_path);
  if (!out) throw std::runtime_error("cannot open '" + manifest_path.string() + "' for writing");
  out << manifest.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed for '" + manifest_path.string() + "'");
}

}  // namespace isac
