#include "isac/mcengine.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <sstream>

namespace isac {

namespace {

constexpr double kZ95 = 1.959963984540054;
constexpr std::uint64_t kPilotKey = 0x70696c6f74ULL;  // "pilot"

// Runs body(i) for i in [0, count) on `parallelism` threads and rethrows the
// exception of the lowest failing index, so failures are deterministic too.
template <typename Body>
void parallel_for(std::size_t count, int parallelism, Body&& body) {
  const auto n = static_cast<std::int64_t>(count);
  std::int64_t failed_at = n;
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 8) num_threads(std::max(parallelism, 1))
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(isac_parallel_for_failure)
      if (i < failed_at) {
        failed_at = i;
        failure = std::current_exception();
      }
    }
  }
  if (failure) std::rethrow_exception(failure);
}

MetricEstimate proportion(std::string name, std::span<const RoundResult> results,
                          double threshold_w, bool with_target) {
  std::size_t trials = 0;
  std::size_t hits = 0;
  for (const auto& r : results) {
    if (!r.sensing) continue;
    ++trials;
    const double statistic = with_target ? r.sensing->present_w : r.sensing->absent_w;
    if (statistic > threshold_w) ++hits;
  }
  return wilson_interval(std::move(name), hits, trials);
}

double pfa_at(std::span<const double> sorted, double threshold) {
  const auto above = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), threshold);
  return static_cast<double>(above) / static_cast<double>(sorted.size());
}

}  // namespace

RoundResult run_round(const ScenarioConfig& config, std::uint64_t round_index) {
  const Realization realization = build_realization(config, round_index);
  const LinkTable links = compute_link_table(realization, config);
  const AssociationMap association = associate(realization, links, config);

  RoundResult out;
  out.round_index = round_index;
  out.uav_count = realization.uavs.size();
  out.device_load_bps = association.load_bps;

  const std::size_t n = realization.residents.size();
  out.resident_sinr.resize(n);
  out.resident_rate_bps.resize(n);
  for (std::size_t r = 0; r < n; ++r) {
    const double sinr = comm_sinr(r, association, links, config);
    const auto sharing = static_cast<double>(association.members[association.serving[r]].size());
    out.resident_sinr[r] = sinr;
    out.resident_rate_bps[r] = config.bandwidth_hz / sharing * std::log2(1.0 + sinr);
  }
  out.sensing = sensing_observation(realization, config);
  return out;
}

std::vector<RoundResult> run_rounds_serial(const ScenarioConfig& config, std::uint64_t first,
                                           std::size_t count) {
  std::vector<RoundResult> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(run_round(config, first + i));
  return out;
}

std::vector<RoundResult> run_rounds(const ScenarioConfig& config, std::uint64_t first,
                                    std::size_t count, int parallelism) {
  std::vector<RoundResult> out(count);
  parallel_for(count, parallelism, [&](std::size_t i) { out[i] = run_round(config, first + i); });
  return out;
}

std::vector<double> absent_statistics(const ScenarioConfig& config, std::uint64_t first,
                                      std::size_t count, int parallelism) {
  std::vector<std::optional<double>> slots(count);
  parallel_for(count, parallelism, [&](std::size_t i) {
    const auto realization = build_realization(config, first + i, RealizationScope::SensingOnly);
    if (const auto obs = sensing_observation(realization, config)) slots[i] = obs->absent_w;
  });
  std::vector<double> out;
  out.reserve(count);
  for (const auto& s : slots) {
    if (s) out.push_back(*s);
  }
  return out;
}

MetricEstimate wilson_interval(std::string name, std::size_t successes, std::size_t trials) {
  if (trials == 0) throw std::invalid_argument(name + ": empty sample");
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = kZ95 * kZ95;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = kZ95 / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  return {std::move(name), p, std::clamp(std::min(center - half, p), 0.0, 1.0),
          std::clamp(std::max(center + half, p), 0.0, 1.0), trials};
}

MetricEstimate mean_interval(std::string name, std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument(name + ": empty sample");
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  const double half = kZ95 * sd / std::sqrt(n);
  return {std::move(name), mean, mean - half, mean + half, values.size()};
}

MetricEstimate coverage_probability(std::span<const RoundResult> results, double threshold) {
  std::size_t trials = 0;
  std::size_t covered = 0;
  for (const auto& r : results) {
    trials += r.resident_sinr.size();
    for (double s : r.resident_sinr) covered += s > threshold ? 1 : 0;
  }
  return wilson_interval("coverage", covered, trials);
}

MetricEstimate throughput(std::span<const RoundResult> results) {
  std::vector<double> rates;
  for (const auto& r : results) {
    rates.insert(rates.end(), r.resident_rate_bps.begin(), r.resident_rate_bps.end());
  }
  return mean_interval("throughput", rates);
}

MetricEstimate detection_probability(std::span<const RoundResult> results, double threshold_w) {
  return proportion("pd", results, threshold_w, true);
}

MetricEstimate false_alarm_probability(std::span<const RoundResult> results, double threshold_w) {
  return proportion("pfa", results, threshold_w, false);
}

MetricEstimate average_sensing_probability(const MetricEstimate& pd, const MetricEstimate& pfa) {
  const double asp = pd.mean * (1.0 - pfa.mean);
  const auto variance = [](const MetricEstimate& e) {
    return e.sample_count > 0 ? e.mean * (1.0 - e.mean) / static_cast<double>(e.sample_count) : 0.0;
  };
  const double q = 1.0 - pfa.mean;
  const double half =
      kZ95 * std::sqrt(q * q * variance(pd) + pd.mean * pd.mean * variance(pfa));
  return {"asp", asp, std::clamp(asp - half, 0.0, asp), std::clamp(asp + half, asp, 1.0),
          std::min(pd.sample_count, pfa.sample_count)};
}

MetricSummary summarize(std::span<const RoundResult> results, const ScenarioConfig& config,
                        double threshold_w) {
  MetricSummary s;
  s.coverage = coverage_probability(results, config.coverage_threshold());
  s.throughput = throughput(results);
  s.pd = detection_probability(results, threshold_w);
  s.pfa = false_alarm_probability(results, threshold_w);
  s.asp = average_sensing_probability(s.pd, s.pfa);
  return s;
}

UnreachableTargetError::UnreachableTargetError(double target, double attained_low,
                                               double attained_high)
    : std::runtime_error([&] {
        std::ostringstream msg;
        msg << "false-alarm target " << target << " unreachable; attained range ["
            << attained_low << ", " << attained_high << "]";
        return msg.str();
      }()),
      low_(attained_low),
      high_(attained_high) {}

double calibrate_threshold(std::span<const double> absent, double target_pfa) {
  if (!(target_pfa > 0.0 && target_pfa <= 1.0)) {
    throw std::invalid_argument("target false-alarm probability must lie in (0, 1]");
  }
  if (target_pfa >= 1.0) return 0.0;
  if (absent.empty()) throw std::invalid_argument("calibration: empty sample");

  std::vector<double> sorted(absent.begin(), absent.end());
  std::sort(sorted.begin(), sorted.end());
  const double tolerance = 0.1 * target_pfa;

  double lo = 0.0;  // Pfa(lo) > target
  double hi = sorted.back();  // Pfa(hi) == 0 < target
  double pfa_lo = pfa_at(sorted, lo);
  double pfa_hi = 0.0;
  for (int iter = 0; iter < 2000; ++iter) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    const double pfa = pfa_at(sorted, mid);
    if (std::fabs(pfa - target_pfa) <= tolerance) return mid;
    if (pfa > target_pfa) {
      lo = mid;
      pfa_lo = pfa;
    } else {
      hi = mid;
      pfa_hi = pfa;
    }
  }
  throw UnreachableTargetError(target_pfa, pfa_hi, pfa_lo);
}

std::uint64_t pilot_seed(std::uint64_t master_seed) {
  return derive_seed(master_seed, {kPilotKey});
}

double calibrate_threshold(const ScenarioConfig& config, double target_pfa, int parallelism) {
  if (target_pfa >= 1.0) return 0.0;
  ScenarioConfig pilot = config;
  pilot.master_seed = pilot_seed(config.master_seed);
  const auto absent = absent_statistics(pilot, 0, config.calibration_rounds, parallelism);
  return calibrate_threshold(absent, target_pfa);
}

double resolve_threshold(const ScenarioConfig& config, int parallelism) {
  if (config.detection_threshold_dbm) return dbm_to_watts(*config.detection_threshold_dbm);
  return calibrate_threshold(config, config.target_pfa, parallelism);
}

}  // namespace isac
