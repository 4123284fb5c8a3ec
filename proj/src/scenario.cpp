#include "isac/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "isac/errors.hpp"

namespace isac {

namespace {

// Stream purposes within a round.
enum StreamPurpose : std::uint64_t {
  kUavStream = 1,
  kResidentStream = 2,
  kBlockageStream = 3,
  kFadingStream = 4,
  kSensingStream = 5,
};

void require(bool ok, const char* field, const std::string& message) {
  if (!ok) throw ConfigError(field, message);
}

double distance3(const Node& a, const Node& b) {
  const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

std::vector<Node> lift(const PointSet& points, double z, NodeRole role) {
  std::vector<Node> nodes;
  nodes.reserve(points.size());
  for (const auto& p : points) nodes.push_back({p.x, p.y, z, role});
  return nodes;
}

std::size_t strongest_device(const LinkTable& links, std::size_t r,
                             const std::vector<char>& eligible) {
  std::size_t best = 0;
  double best_power = -1.0;
  for (std::size_t k = 0; k < links.devices; ++k) {
    if (!eligible[k]) continue;
    const double p = links.mean_power(r, k);
    if (p > best_power) {
      best_power = p;
      best = k;
    }
  }
  return best;
}

void insert_sorted(std::vector<std::size_t>& v, std::size_t value) {
  v.insert(std::lower_bound(v.begin(), v.end(), value), value);
}

}  // namespace

void ScenarioConfig::validate() const {
  require(region_radius_m > 0.0 && std::isfinite(region_radius_m), "region_radius_m", "must be > 0");
  require(hole_radius_m >= 0.0, "hole_radius_m", "must be >= 0");
  require(hole_radius_m < region_radius_m, "hole_radius_m", "holeRadius < region.radius must hold");
  require(bs_height_m >= 1.0, "bs_height_m", "must be >= 1 m");
  require(uav_height_m >= 1.0, "uav_height_m", "must be >= 1 m");
  require(std::fabs(uav_height_m - bs_height_m) >= 1.0 || hole_radius_m >= 1.0, "uav_height_m",
          "UAVs could come within 1 m of the BS; separate the heights or use a hole");
  require(uav_beta_per_m >= 0.0, "uav_beta_per_m", "must be >= 0");
  require(resident_beta_per_m >= 0.0, "resident_beta_per_m", "must be >= 0");
  require(uav_mean_count >= 0.0, "uav_mean_count", "must be >= 0");
  require(resident_mean_count >= 0.0, "resident_mean_count", "must be >= 0");
  require(std::isfinite(bs_tx_power_dbm), "bs_tx_power_dbm", "must be finite");
  require(std::isfinite(uav_tx_power_dbm), "uav_tx_power_dbm", "must be finite");
  require(std::isfinite(sensing_tx_power_dbm), "sensing_tx_power_dbm", "must be finite");
  require(std::isfinite(noise_power_dbm), "noise_power_dbm", "must be finite");
  require(std::isfinite(coverage_threshold_db), "coverage_threshold_db", "must be finite");
  require(bandwidth_hz > 0.0, "bandwidth_hz", "must be > 0");
  require(uav_capacity_cap_bps > 0.0, "uav_capacity_cap_bps", "must be > 0");

  require(comm.carrier_frequency_hz > 0.0, "carrier_frequency_hz", "must be > 0");
  require(sensing.carrier_frequency_hz == comm.carrier_frequency_hz, "carrier_frequency_hz",
          "sensing and communication must share the carrier");
  require(comm.los_path_loss_exponent >= 2.0, "los_path_loss_exponent", "must be >= 2");
  require(comm.nlos_path_loss_exponent >= 2.0, "nlos_path_loss_exponent", "must be >= 2");
  require(comm.bs_path_loss_exponent >= 2.0, "bs_path_loss_exponent", "must be >= 2");
  require(comm.nlos_extra_loss_db >= 0.0, "nlos_extra_loss_db", "must be >= 0");
  require(comm.nakagami_m_los >= 0.5, "nakagami_m_los", "invalid Nakagami shape (must be >= 0.5)");
  require(comm.nakagami_m_nlos >= 0.5, "nakagami_m_nlos", "invalid Nakagami shape (must be >= 0.5)");
  require(comm.bs_nakagami_m >= 0.5, "bs_nakagami_m", "invalid Nakagami shape (must be >= 0.5)");
  require(comm.blockage_a > 0.0, "blockage_a", "must be > 0");
  require(comm.blockage_b > 0.0, "blockage_b", "must be > 0");

  require(sensing.beam_std_rad > 0.0, "beam_std_rad", "must be > 0");
  require(sensing.radar_cross_section_m2 > 0.0, "radar_cross_section_m2", "must be > 0");
  require(sensing.path_loss_exponent >= 2.0, "sensing_path_loss_exponent", "must be >= 2");
  require(std::isfinite(sensing.processing_gain_db), "sensing_processing_gain_db", "must be finite");
  if (detection_threshold_dbm) {
    require(std::isfinite(*detection_threshold_dbm), "detection_threshold_dbm", "must be finite");
  }
  require(target_pfa > 0.0 && target_pfa <= 1.0, "target_pfa", "must lie in (0, 1]");
  require(rounds > 0, "rounds", "must be > 0");
  require(calibration_rounds > 0, "calibration_rounds", "must be > 0");
}

RpdiParams ScenarioConfig::uav_process() const {
  return {uav_beta_per_m, uav_mean_count, DiskRegion{0.0, 0.0, region_radius_m, hole_radius_m}};
}

RpdiParams ScenarioConfig::resident_process() const {
  return {resident_beta_per_m, resident_mean_count, DiskRegion{0.0, 0.0, region_radius_m, 0.0}};
}

BlockageState Realization::blockage_state(std::size_t resident, std::size_t device) const {
  if (device == 0) return BlockageState::LoS;
  return blockage[resident * uavs.size() + (device - 1)];
}

LinkGeometry link_geometry(const Node& a, const Node& b) {
  return LinkGeometry::from_offsets(a.x - b.x, a.y - b.y, a.z - b.z);
}

Realization build_realization(const ScenarioConfig& config, std::uint64_t round_index,
                              RealizationScope scope) {
  const std::uint64_t seed = config.master_seed;
  Realization out;
  out.bs = Node{0.0, 0.0, config.bs_height_m, NodeRole::BaseStation};

  if (config.uav_mean_count > 0.0) {
    auto rng = RandomStream::derive(seed, {round_index, kUavStream});
    out.uavs = lift(sample_php(config.uav_process(), rng), config.uav_height_m, NodeRole::Uav);
  }

  if (scope == RealizationScope::Full) {
    if (config.resident_mean_count > 0.0) {
      auto rng = RandomStream::derive(seed, {round_index, kResidentStream});
      out.residents = lift(sample_rpdi(config.resident_process(), rng), 0.0, NodeRole::Resident);
    }

    const std::size_t n_res = out.residents.size();
    const std::size_t n_uav = out.uavs.size();
    out.blockage.resize(n_res * n_uav);
    out.los_probability.resize(n_res * n_uav);
    {
      auto rng = RandomStream::derive(seed, {round_index, kBlockageStream});
      for (std::size_t r = 0; r < n_res; ++r) {
        for (std::size_t u = 0; u < n_uav; ++u) {
          const auto g = link_geometry(out.residents[r], out.uavs[u]);
          const double p_los = los_probability(g.elevation_angle, config.comm);
          out.los_probability[r * n_uav + u] = p_los;
          out.blockage[r * n_uav + u] =
              rng.uniform() < p_los ? BlockageState::LoS : BlockageState::NLoS;
        }
      }
    }

    const std::size_t n_dev = out.device_count();
    out.comm_fading.resize(n_res * n_dev);
    auto rng = RandomStream::derive(seed, {round_index, kFadingStream});
    for (std::size_t r = 0; r < n_res; ++r) {
      for (std::size_t k = 0; k < n_dev; ++k) {
        const LinkKind kind = k == 0 ? LinkKind::BsResident : LinkKind::UavResident;
        const double m = nakagami_shape(kind, out.blockage_state(r, k), config.comm);
        out.comm_fading[r * n_dev + k] = sample_fading_power(m, 1.0, rng);
      }
    }
  }

  if (!out.uavs.empty()) {
    auto rng = RandomStream::derive(seed, {round_index, kSensingStream});
    if (config.sensing_target == SensingTargetRule::UniformRandom) {
      out.sensing_target = static_cast<std::size_t>(rng.below(out.uavs.size()));
    } else {
      std::size_t nearest = 0;
      for (std::size_t u = 1; u < out.uavs.size(); ++u) {
        if (distance3(out.bs, out.uavs[u]) < distance3(out.bs, out.uavs[nearest])) nearest = u;
      }
      out.sensing_target = nearest;
    }
    out.sensing_fading.resize(out.uavs.size());
    for (auto& f : out.sensing_fading) f = sample_fading_power(1.0, 1.0, rng);
  }
  return out;
}

LinkTable compute_link_table(const Realization& realization, const ScenarioConfig& config) {
  const std::size_t n_res = realization.residents.size();
  const std::size_t n_dev = realization.device_count();
  const double noise = config.noise_power_w();
  const double bs_tx = config.bs_tx_power_w();
  const double uav_tx = config.uav_tx_power_w();

  LinkTable table;
  table.devices = n_dev;
  table.mean.resize(n_res * n_dev);
  table.instantaneous.resize(n_res * n_dev);
  table.mean_spectral_efficiency.resize(n_res * n_dev);

  // Same arithmetic as path_gain(), hoisted out of the per-link loop.
  const auto& comm = config.comm;
  const double k_ref = free_space_reference_gain(comm.carrier_frequency_hz);
  const double nlos_extra = db_to_linear(-comm.nlos_extra_loss_db);
  const std::size_t n_uav = realization.uavs.size();

  std::vector<double> prefix(n_dev + 1);
  for (std::size_t r = 0; r < n_res; ++r) {
    const Node& resident = realization.residents[r];
    double* mean = &table.mean[r * n_dev];
    double* inst = &table.instantaneous[r * n_dev];
    for (std::size_t k = 0; k < n_dev; ++k) {
      const Node& dev = realization.device(k);
      const double dx = resident.x - dev.x, dy = resident.y - dev.y, dz = resident.z - dev.z;
      const double d = std::sqrt(dx * dx + dy * dy + dz * dz);
      if (!(d >= 1.0)) throw std::domain_error("inside reference distance");
      const double fading = realization.fading(r, k);
      if (k == 0) {
        const double gain = k_ref * inverse_power(d, comm.bs_path_loss_exponent);
        mean[k] = bs_tx * gain;
        inst[k] = bs_tx * gain * fading;
      } else {
        const double los = k_ref * inverse_power(d, comm.los_path_loss_exponent);
        const double nlos = k_ref * inverse_power(d, comm.nlos_path_loss_exponent) * nlos_extra;
        const double p_los = realization.los_probability[r * n_uav + (k - 1)];
        mean[k] = uav_tx * (p_los * los + (1.0 - p_los) * nlos);
        const bool is_los = realization.blockage_state(r, k) == BlockageState::LoS;
        inst[k] = uav_tx * (is_los ? los : nlos) * fading;
      }
    }
    // Interference sums excluding one device, via prefix and suffix sums.
    prefix[0] = 0.0;
    for (std::size_t k = 0; k < n_dev; ++k) prefix[k + 1] = prefix[k] + mean[k];
    double suffix = 0.0;
    for (std::size_t k = n_dev; k-- > 0;) {
      const double interference = prefix[k] + suffix;
      table.mean_spectral_efficiency[r * n_dev + k] =
          std::log2(1.0 + mean[k] / (interference + noise));
      suffix += mean[k];
    }
  }
  return table;
}

double device_load(const LinkTable& links, const std::vector<std::size_t>& members,
                   std::size_t device, const ScenarioConfig& config) {
  if (members.empty()) return 0.0;
  double se = 0.0;
  for (std::size_t r : members) se += links.mean_se(r, device);
  return config.bandwidth_hz / static_cast<double>(members.size()) * se;
}

AssociationMap enforce_capacity(AssociationMap map, const Realization& realization,
                                const LinkTable& links, const ScenarioConfig& config) {
  const std::size_t n_dev = realization.device_count();
  const std::size_t n_res = realization.residents.size();
  const double cap = config.uav_capacity_cap_bps;
  std::vector<char> rejected(n_res * n_dev, 0);
  std::vector<char> eligible(n_dev);

  for (;;) {
    std::size_t overloaded = 0;
    for (std::size_t k = 1; k < n_dev; ++k) {
      if (map.load_bps[k] > cap) {
        overloaded = k;
        break;
      }
    }
    if (overloaded == 0) break;

    auto& members = map.members[overloaded];
    const Node& uav = realization.device(overloaded);
    std::size_t farthest_pos = 0;
    double farthest = -1.0;
    for (std::size_t i = 0; i < members.size(); ++i) {
      const double d = distance3(realization.residents[members[i]], uav);
      if (d > farthest) {
        farthest = d;
        farthest_pos = i;
      }
    }
    const std::size_t r = members[farthest_pos];
    members.erase(members.begin() + static_cast<std::ptrdiff_t>(farthest_pos));
    map.load_bps[overloaded] = device_load(links, members, overloaded, config);
    rejected[r * n_dev + overloaded] = 1;

    eligible[0] = 1;
    for (std::size_t k = 1; k < n_dev; ++k) {
      eligible[k] = !rejected[r * n_dev + k] && map.load_bps[k] < cap;
    }
    const std::size_t to = strongest_device(links, r, eligible);
    insert_sorted(map.members[to], r);
    map.serving[r] = to;
    map.load_bps[to] = device_load(links, map.members[to], to, config);
    map.drops.push_back({r, overloaded, to});
  }
  return map;
}

AssociationMap associate(const Realization& realization, const LinkTable& links,
                         const ScenarioConfig& config) {
  const std::size_t n_dev = realization.device_count();
  const std::size_t n_res = realization.residents.size();
  AssociationMap map;
  map.serving.resize(n_res);
  map.members.resize(n_dev);
  map.load_bps.assign(n_dev, 0.0);

  const std::vector<char> all(n_dev, 1);
  for (std::size_t r = 0; r < n_res; ++r) {
    const std::size_t k = strongest_device(links, r, all);
    map.serving[r] = k;
    map.members[k].push_back(r);
  }
  for (std::size_t k = 0; k < n_dev; ++k) {
    map.load_bps[k] = device_load(links, map.members[k], k, config);
  }
  return enforce_capacity(std::move(map), realization, links, config);
}

AssociationMap associate(const Realization& realization, const ScenarioConfig& config) {
  return associate(realization, compute_link_table(realization, config), config);
}

double comm_sinr(std::size_t resident, const AssociationMap& association, const LinkTable& links,
                 const ScenarioConfig& config) {
  const std::size_t serving = association.serving[resident];
  double interference = 0.0;
  for (std::size_t k = 0; k < links.devices; ++k) {
    if (k != serving) interference += links.inst_power(resident, k);
  }
  return links.inst_power(resident, serving) / (interference + config.noise_power_w());
}

double boresight_offset(const Node& bs, const Node& a, const Node& b) {
  const double ax = a.x - bs.x, ay = a.y - bs.y, az = a.z - bs.z;
  const double bx = b.x - bs.x, by = b.y - bs.y, bz = b.z - bs.z;
  const double cx = ay * bz - az * by;
  const double cy = az * bx - ax * bz;
  const double cz = ax * by - ay * bx;
  return std::atan2(std::hypot(cx, cy, cz), ax * bx + ay * by + az * bz);
}

std::optional<SensingObservation> sensing_observation(const Realization& realization,
                                                      const ScenarioConfig& config) {
  if (realization.uavs.empty() || !realization.sensing_target) return std::nullopt;
  const std::size_t target = *realization.sensing_target;
  const Node& aligned = realization.uavs[target];

  SensingObservation obs;
  obs.noise_w = config.noise_power_w();
  obs.echo_w = radar_echo_power(config.sensing_tx_power_w(), link_geometry(realization.bs, aligned),
                                0.0, realization.sensing_fading[target], config.sensing);
  const double uav_tx = config.uav_tx_power_w();
  for (std::size_t u = 0; u < realization.uavs.size(); ++u) {
    if (u == target) continue;
    const Node& other = realization.uavs[u];
    obs.interference_w += sensing_interference_power(
        uav_tx, link_geometry(realization.bs, other), boresight_offset(realization.bs, aligned, other),
        realization.sensing_fading[u], config.sensing);
  }
  obs.absent_w = obs.interference_w + obs.noise_w;
  obs.present_w = obs.absent_w + obs.echo_w;
  return obs;
}

}  // namespace isac
