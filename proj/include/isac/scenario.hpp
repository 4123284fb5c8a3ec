#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "isac/channel.hpp"
#include "isac/pointprocess.hpp"

namespace isac {

enum class NodeRole { BaseStation, Uav, Resident };

struct Node {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  NodeRole role = NodeRole::Resident;
};

enum class SensingTargetRule { UniformRandom, Nearest };

/// Every physical and statistical parameter of one experiment. Powers and
/// thresholds are kept in the logarithmic units they are configured in.
struct ScenarioConfig {
  double region_radius_m = 1500.0;
  double hole_radius_m = 200.0;
  double bs_height_m = 50.0;
  double uav_height_m = 150.0;
  double uav_beta_per_m = 2e-3;
  double resident_beta_per_m = 2e-3;
  double uav_mean_count = 14.0;
  double resident_mean_count = 100.0;

  double bs_tx_power_dbm = 40.0;
  double uav_tx_power_dbm = 30.0;
  double sensing_tx_power_dbm = 40.0;
  double bandwidth_hz = 10e6;
  double noise_power_dbm = -97.0;  // -174 dBm/Hz + 70 dB (10 MHz) + 7 dB NF
  double coverage_threshold_db = 0.0;
  double uav_capacity_cap_bps = 2e7;

  CommChannelParams comm;
  SensingChannelParams sensing;
  SensingTargetRule sensing_target = SensingTargetRule::UniformRandom;

  /// Fixed sensing threshold; calibrated to target_pfa when absent.
  std::optional<double> detection_threshold_dbm;
  double target_pfa = 0.05;

  std::uint64_t master_seed = 1;
  std::size_t rounds = 10000;
  std::size_t calibration_rounds = 10000;

  /// Throws ConfigError naming the first invalid field.
  void validate() const;

  double bs_tx_power_w() const { return dbm_to_watts(bs_tx_power_dbm); }
  double uav_tx_power_w() const { return dbm_to_watts(uav_tx_power_dbm); }
  double sensing_tx_power_w() const { return dbm_to_watts(sensing_tx_power_dbm); }
  double noise_power_w() const { return dbm_to_watts(noise_power_dbm); }
  double coverage_threshold() const { return db_to_linear(coverage_threshold_db); }

  RpdiParams uav_process() const;
  RpdiParams resident_process() const;
};

/// Which parts of a realization to draw. Streams are split by purpose, so a
/// sensing-only realization matches the UAV and sensing parts of a full one.
enum class RealizationScope { Full, SensingOnly };

/// One Monte Carlo draw. Device index 0 is the BS; device k >= 1 is uavs[k-1].
struct Realization {
  Node bs;
  std::vector<Node> uavs;
  std::vector<Node> residents;

  /// residents x uavs, row-major.
  std::vector<BlockageState> blockage;
  std::vector<double> los_probability;  // residents x uavs, the draw's success prob
  /// residents x devices, row-major; unit-mean Nakagami power draws.
  std::vector<double> comm_fading;

  std::optional<std::size_t> sensing_target;
  /// Per UAV: echo fading for the target, one-way fading for the others.
  std::vector<double> sensing_fading;

  std::size_t device_count() const { return uavs.size() + 1; }
  const Node& device(std::size_t k) const { return k == 0 ? bs : uavs[k - 1]; }
  BlockageState blockage_state(std::size_t resident, std::size_t device) const;
  double fading(std::size_t resident, std::size_t device) const {
    return comm_fading[resident * device_count() + device];
  }
};

Realization build_realization(const ScenarioConfig& config, std::uint64_t round_index,
                              RealizationScope scope = RealizationScope::Full);

LinkGeometry link_geometry(const Node& a, const Node& b);

/// Average and instantaneous received power for every resident-device pair,
/// all stored residents x devices, row-major.
struct LinkTable {
  std::size_t devices = 0;
  std::vector<double> mean;
  std::vector<double> instantaneous;
  /// log2(1 + mean-power SINR) if the resident were served by that device.
  std::vector<double> mean_spectral_efficiency;

  double mean_power(std::size_t r, std::size_t k) const { return mean[r * devices + k]; }
  double inst_power(std::size_t r, std::size_t k) const { return instantaneous[r * devices + k]; }
  double mean_se(std::size_t r, std::size_t k) const {
    return mean_spectral_efficiency[r * devices + k];
  }
};

LinkTable compute_link_table(const Realization& realization, const ScenarioConfig& config);

/// A capacity-driven disassociation: `resident` was shed by UAV `from` and
/// re-homed on device `to`.
struct DropEvent {
  std::size_t resident = 0;
  std::size_t from = 0;
  std::size_t to = 0;
};

struct AssociationMap {
  std::vector<std::size_t> serving;               // per resident
  std::vector<std::vector<std::size_t>> members;  // per device, ascending
  std::vector<double> load_bps;                   // per device
  std::vector<DropEvent> drops;
};

/// Equal-split load of a device: (B / n) * sum of log2(1 + mean SINR).
double device_load(const LinkTable& links, const std::vector<std::size_t>& members,
                   std::size_t device, const ScenarioConfig& config);

/// Strongest-average-power association with capacity shedding: while a UAV
/// exceeds the cap it drops its farthest (3-D) resident, who re-picks the
/// strongest device among the BS and the unsaturated UAVs that have not
/// rejected it. Ties go to the smaller device index.
AssociationMap associate(const Realization& realization, const LinkTable& links,
                         const ScenarioConfig& config);
AssociationMap associate(const Realization& realization, const ScenarioConfig& config);

/// Runs the shedding loop starting from an existing map. A map produced by
/// associate() is a fixed point.
AssociationMap enforce_capacity(AssociationMap map, const Realization& realization,
                                const LinkTable& links, const ScenarioConfig& config);

/// Instantaneous SINR of one resident: serving power over all other devices
/// plus noise.
double comm_sinr(std::size_t resident, const AssociationMap& association,
                 const LinkTable& links, const ScenarioConfig& config);

struct SensingObservation {
  double echo_w = 0.0;
  double interference_w = 0.0;
  double noise_w = 0.0;
  double present_w = 0.0;  // echo + interference + noise
  double absent_w = 0.0;   // interference + noise
};

/// Angle between the directions BS->a and BS->b.
double boresight_offset(const Node& bs, const Node& a, const Node& b);

/// Coupled sensing test statistics for the round; nullopt without UAVs.
std::optional<SensingObservation> sensing_observation(const Realization& realization,
                                                      const ScenarioConfig& config);

}  // namespace isac
