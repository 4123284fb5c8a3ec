#include "isac/channel.hpp"

#include <algorithm>
#include <numbers>
#include <stdexcept>

namespace isac {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;
constexpr double kReferenceDistance = 1.0;  // m

void require_outside_reference(const LinkGeometry& geometry) {
  if (!(geometry.euclidean_distance >= kReferenceDistance)) {
    throw std::domain_error("inside reference distance");
  }
}

}  // namespace

double inverse_power(double d, double exponent) {
  if (exponent == 2.0) return 1.0 / (d * d);
  if (exponent == 3.0) return 1.0 / (d * d * d);
  if (exponent == 4.0) return 1.0 / ((d * d) * (d * d));
  return std::pow(d, -exponent);
}

void CommChannelParams::validate() const {
  if (!(carrier_frequency_hz > 0.0)) throw std::invalid_argument("carrier frequency must be > 0");
  if (!(los_path_loss_exponent >= 2.0) || !(nlos_path_loss_exponent >= 2.0) ||
      !(bs_path_loss_exponent >= 2.0)) {
    throw std::invalid_argument("path-loss exponents must be >= 2");
  }
  if (!(nakagami_m_los >= 0.5) || !(nakagami_m_nlos >= 0.5) || !(bs_nakagami_m >= 0.5)) {
    throw std::invalid_argument("invalid Nakagami shape");
  }
}

void SensingChannelParams::validate() const {
  if (!(carrier_frequency_hz > 0.0)) throw std::invalid_argument("carrier frequency must be > 0");
  if (!(beam_std_rad > 0.0)) throw std::invalid_argument("beam std must be > 0");
  if (!(radar_cross_section_m2 > 0.0)) throw std::invalid_argument("radar cross section must be > 0");
  if (!(path_loss_exponent >= 2.0)) throw std::invalid_argument("sensing path-loss exponent must be >= 2");
}

LinkGeometry LinkGeometry::from_offsets(double dx, double dy, double dz) {
  LinkGeometry g;
  // Plain sqrt: distances here are far from overflow and hypot is slow.
  const double h2 = dx * dx + dy * dy;
  g.horizontal_distance = std::sqrt(h2);
  g.height_difference = std::fabs(dz);
  g.euclidean_distance = std::sqrt(h2 + dz * dz);
  g.elevation_angle = std::atan2(g.height_difference, g.horizontal_distance);
  return g;
}

double free_space_reference_gain(double carrier_frequency_hz) {
  const double ratio = kSpeedOfLight / carrier_frequency_hz / kFourPi;
  return ratio * ratio;
}

double monostatic_reference_gain(double carrier_frequency_hz) {
  const double wavelength = kSpeedOfLight / carrier_frequency_hz;
  return wavelength * wavelength / (kFourPi * kFourPi * kFourPi);
}

double beam_gain(double offset_angle, double beam_std) {
  return std::exp(-offset_angle * offset_angle / (2.0 * beam_std * beam_std));
}

double los_probability(double elevation_angle, const CommChannelParams& params) {
  const double degrees = elevation_angle * 180.0 / std::numbers::pi;
  const double a = params.blockage_a;
  return 1.0 / (1.0 + a * std::exp(-params.blockage_b * (degrees - a)));
}

double path_gain(const LinkGeometry& geometry, BlockageState state, LinkKind kind,
                 const CommChannelParams& params) {
  require_outside_reference(geometry);
  const double k = free_space_reference_gain(params.carrier_frequency_hz);
  const double d = geometry.euclidean_distance;
  if (kind == LinkKind::BsResident) return k * inverse_power(d, params.bs_path_loss_exponent);
  if (state == BlockageState::LoS) return k * inverse_power(d, params.los_path_loss_exponent);
  return k * inverse_power(d, params.nlos_path_loss_exponent) *
         db_to_linear(-params.nlos_extra_loss_db);
}

double mean_received_power(double tx_power, const LinkGeometry& geometry, LinkKind kind,
                           const CommChannelParams& params) {
  if (kind == LinkKind::BsResident) {
    return tx_power * path_gain(geometry, BlockageState::LoS, kind, params);
  }
  const double p_los = los_probability(geometry.elevation_angle, params);
  return tx_power * (p_los * path_gain(geometry, BlockageState::LoS, kind, params) +
                     (1.0 - p_los) * path_gain(geometry, BlockageState::NLoS, kind, params));
}

double nakagami_shape(LinkKind kind, BlockageState state, const CommChannelParams& params) {
  if (kind == LinkKind::BsResident) return params.bs_nakagami_m;
  return state == BlockageState::LoS ? params.nakagami_m_los : params.nakagami_m_nlos;
}

BlockageState sample_blockage(double elevation_angle, const CommChannelParams& params,
                              RandomStream& rng) {
  return rng.uniform() < los_probability(elevation_angle, params) ? BlockageState::LoS
                                                                  : BlockageState::NLoS;
}

double sample_fading_power(double shape, double mean_power, RandomStream& rng) {
  if (!(shape >= 0.5)) throw std::invalid_argument("invalid Nakagami shape");
  if (!(mean_power > 0.0)) throw std::invalid_argument("fading mean power must be > 0");
  if (shape == 1.0) return mean_power * rng.exponential();
  return rng.gamma(shape, mean_power / shape);
}

double instantaneous_received_power(double tx_power, const LinkGeometry& geometry,
                                    BlockageState state, double fading, LinkKind kind,
                                    const CommChannelParams& params) {
  return tx_power * path_gain(geometry, state, kind, params) * fading;
}

double radar_echo_power(double tx_power, const LinkGeometry& target, double offset_angle,
                        double fading, const SensingChannelParams& params) {
  require_outside_reference(target);
  const double gain = beam_gain(offset_angle, params.beam_std_rad);
  return tx_power * gain * gain * params.radar_cross_section_m2 *
         monostatic_reference_gain(params.carrier_frequency_hz) *
         inverse_power(target.euclidean_distance, 2.0 * params.path_loss_exponent) * fading *
         db_to_linear(params.processing_gain_db);
}

double sensing_interference_power(double tx_power, const LinkGeometry& geometry,
                                  double offset_angle, double fading,
                                  const SensingChannelParams& params) {
  require_outside_reference(geometry);
  return tx_power * beam_gain(offset_angle, params.beam_std_rad) *
         free_space_reference_gain(params.carrier_frequency_hz) *
         inverse_power(geometry.euclidean_distance, params.path_loss_exponent) * fading;
}

}  // namespace isac
