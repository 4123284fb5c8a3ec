#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "isac/mcengine.hpp"
#include "isac/scenario.hpp"

namespace isac {

/// Parameter grid over UAV height, hole radius and non-homogeneity.
struct SweepGrid {
  std::vector<double> heights_m;
  std::vector<double> hole_radii_m;
  std::vector<double> betas_per_m;
  std::size_t rounds_per_cell = 10000;

  static SweepGrid defaults();
  void validate() const;
  std::size_t cell_count() const {
    return heights_m.size() * hole_radii_m.size() * betas_per_m.size();
  }
};

struct CellCoordinates {
  double height_m = 0.0;
  double hole_radius_m = 0.0;
  double beta_per_m = 0.0;

  auto operator<=>(const CellCoordinates&) const = default;
};

struct SweepRow {
  CellCoordinates cell;
  MetricSummary metrics;
  std::size_t rounds = 0;
  std::uint64_t seed = 0;
};

struct FailedCell {
  CellCoordinates cell;
  std::string reason;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // grid order: height, then hole radius, then beta
  std::vector<FailedCell> failed;
  double detection_threshold_w = 0.0;
  std::uint64_t master_seed = 0;
};

struct SweepOptions {
  int parallelism = 1;
  /// Overrides both the configured and the calibrated threshold.
  std::optional<double> threshold_w;
};

/// Seed of one cell, derived from the master seed and the cell's coordinates
/// (not its position in the grid).
std::uint64_t cell_seed(std::uint64_t master_seed, const CellCoordinates& cell);

/// Base config moved to `cell`, with the cell's derived seed and round count.
ScenarioConfig cell_config(const ScenarioConfig& base, const CellCoordinates& cell,
                           std::size_t rounds);

/// Runs one cell standalone: config.rounds rounds at config.master_seed.
SweepRow run_cell(const ScenarioConfig& config, double threshold_w, int parallelism);

/// Every cell of the grid with the expected UAV count renormalized per cell
/// and a single detection threshold shared by all cells. Cells whose region
/// is degenerate are listed in `failed` and skipped.
SweepResult run_sweep(const SweepGrid& grid, const ScenarioConfig& base,
                      const SweepOptions& options = {});

/// Looks up coverage, throughput, pd, pfa or asp. Throws std::invalid_argument
/// for any other name.
const MetricEstimate& metric_by_name(const MetricSummary& summary, std::string_view metric);

struct ArgmaxCell {
  CellCoordinates cell;
  double value = 0.0;
};

/// Cell with the largest estimate of `metric`, optionally restricted to one
/// height. Ties go to the smallest coordinates.
ArgmaxCell argmax_cell(const SweepResult& result, std::string_view metric,
                       std::optional<double> height_m = std::nullopt);

inline constexpr std::string_view kCsvHeader =
    "height_m,hole_radius_m,beta_per_m,coverage,coverage_lo,coverage_hi,throughput_bps,"
    "throughput_lo,throughput_hi,pd,pd_lo,pd_hi,pfa,pfa_lo,pfa_hi,asp,asp_lo,asp_hi,rounds,seed";

/// Shortest round-trip decimal form; identical inputs give identical text.
std::string format_number(double value);

std::string format_csv(const SweepResult& result);
/// Parses text produced by format_csv. Throws std::runtime_error on schema mismatch.
std::vector<SweepRow> parse_csv(std::string_view text);

/// Context recorded alongside the results.
struct RunRecord {
  std::string mode;
  ScenarioConfig config;
  std::optional<SweepGrid> grid;
  double wall_seconds = 0.0;
  int parallelism = 1;
};

/// Writes `results.csv` and `manifest.json` into `dir` (created if needed).
/// I/O failures raise std::runtime_error carrying the path.
void emit_results(const SweepResult& result, const RunRecord& record,
                  const std::filesystem::path& dir);

std::string code_version();

}  // namespace isac
