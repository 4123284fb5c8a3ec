#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "isac/scenario.hpp"

namespace isac {

struct MetricEstimate {
  std::string name;
  double mean = 0.0;
  double ci95_low = 0.0;
  double ci95_high = 0.0;
  std::size_t sample_count = 0;
};

struct RoundResult {
  std::uint64_t round_index = 0;
  std::size_t uav_count = 0;
  std::vector<double> resident_sinr;
  std::vector<double> resident_rate_bps;
  std::vector<double> device_load_bps;
  std::optional<SensingObservation> sensing;  // empty when the round had no UAVs
};

/// Realization, association, per-resident SINR and rate, and one sensing
/// observation. Fully determined by (config.master_seed, round_index).
RoundResult run_round(const ScenarioConfig& config, std::uint64_t round_index);

/// Reference loop over rounds [first, first + count).
std::vector<RoundResult> run_rounds_serial(const ScenarioConfig& config, std::uint64_t first,
                                           std::size_t count);

/// OpenMP version of run_rounds_serial. Output is indexed by round, so it is
/// identical to the serial result for any thread count.
std::vector<RoundResult> run_rounds(const ScenarioConfig& config, std::uint64_t first,
                                    std::size_t count, int parallelism);

/// Sensing statistic without a target (interference + noise) for the rounds
/// that have at least one UAV. Only UAV and sensing draws are made.
std::vector<double> absent_statistics(const ScenarioConfig& config, std::uint64_t first,
                                      std::size_t count, int parallelism);

MetricEstimate wilson_interval(std::string name, std::size_t successes, std::size_t trials);
MetricEstimate mean_interval(std::string name, std::span<const double> values);

/// Fraction of resident-rounds with SINR strictly above `threshold` (linear).
MetricEstimate coverage_probability(std::span<const RoundResult> results, double threshold);
/// Mean per-resident Shannon rate in bit/s.
MetricEstimate throughput(std::span<const RoundResult> results);
MetricEstimate detection_probability(std::span<const RoundResult> results, double threshold_w);
MetricEstimate false_alarm_probability(std::span<const RoundResult> results, double threshold_w);
/// Pd * (1 - Pfa), interval by the delta method.
MetricEstimate average_sensing_probability(const MetricEstimate& pd, const MetricEstimate& pfa);

struct MetricSummary {
  MetricEstimate coverage;
  MetricEstimate throughput;
  MetricEstimate pd;
  MetricEstimate pfa;
  MetricEstimate asp;
};

MetricSummary summarize(std::span<const RoundResult> results, const ScenarioConfig& config,
                        double threshold_w);

class UnreachableTargetError : public std::runtime_error {
 public:
  UnreachableTargetError(double target, double attained_low, double attained_high);
  double attained_low() const noexcept { return low_; }
  double attained_high() const noexcept { return high_; }

 private:
  double low_;
  double high_;
};

/// Bisection on the threshold over the given absent statistics until the
/// empirical false-alarm rate is within 10 % (relative) of `target_pfa`.
double calibrate_threshold(std::span<const double> absent, double target_pfa);

/// Calibrates on config.calibration_rounds pilot rounds drawn from a seed
/// derived from, but disjoint with, the measurement rounds.
double calibrate_threshold(const ScenarioConfig& config, double target_pfa, int parallelism);

/// The configured threshold if set, otherwise a calibrated one (watts).
double resolve_threshold(const ScenarioConfig& config, int parallelism);

/// Seed of the pilot rounds used for calibration.
std::uint64_t pilot_seed(std::uint64_t master_seed);

}  // namespace isac
