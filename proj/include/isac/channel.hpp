#pragma once

#include <cmath>

#include "isac/random.hpp"

namespace isac {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

enum class LinkKind { BsResident, UavResident };
enum class BlockageState { LoS, NLoS };

/// Downlink communication channel. UAV-resident links switch between a LoS
/// and a blocked regime drawn from an elevation-angle sigmoid; BS-resident
/// links use a single exponent.
struct CommChannelParams {
  double carrier_frequency_hz = 2e9;
  double los_path_loss_exponent = 2.0;
  double nlos_path_loss_exponent = 3.0;
  double nlos_extra_loss_db = 20.0;
  double nakagami_m_los = 3.0;
  double nakagami_m_nlos = 1.0;
  double bs_path_loss_exponent = 3.0;
  double bs_nakagami_m = 2.0;
  double blockage_a = 12.08;
  double blockage_b = 0.11;

  void validate() const;
};

/// Monostatic sensing at the BS with a Gaussian beam.
struct SensingChannelParams {
  double carrier_frequency_hz = 2e9;
  double beam_std_rad = 0.174532925199433;  // 10 degrees
  double radar_cross_section_m2 = 0.1;
  double path_loss_exponent = 2.0;  // per one-way leg
  // Pulse compression + coherent integration on the echo only; 60 dB is a
  // 100 ms dwell at 10 MHz. Interference is a mismatched waveform and gets none.
  double processing_gain_db = 60.0;

  void validate() const;
};

struct LinkGeometry {
  double horizontal_distance = 0.0;
  double height_difference = 0.0;
  double elevation_angle = 0.0;  // radians in [0, pi/2]
  double euclidean_distance = 0.0;

  /// Geometry between two points given their horizontal offset and height offset.
  static LinkGeometry from_offsets(double dx, double dy, double dz);
};

/// (lambda / 4 pi)^2: free-space gain at the 1 m reference distance.
/// d^-exponent, with exact fast paths for the integer exponents in use.
double inverse_power(double d, double exponent);

double free_space_reference_gain(double carrier_frequency_hz);
/// lambda^2 / (4 pi)^3: monostatic radar-equation constant.
double monostatic_reference_gain(double carrier_frequency_hz);

double beam_gain(double offset_angle, double beam_std);

/// LoS probability 1 / (1 + a exp(-b (theta_deg - a))) for elevation theta.
double los_probability(double elevation_angle, const CommChannelParams& params);

/// Received power averaged over blockage and unit-mean fading.
/// Throws std::domain_error inside the 1 m reference distance.
double mean_received_power(double tx_power, const LinkGeometry& geometry, LinkKind kind,
                           const CommChannelParams& params);

/// Path gain (including the reference constant) for a resolved blockage state.
/// The state is ignored for BS-resident links.
double path_gain(const LinkGeometry& geometry, BlockageState state, LinkKind kind,
                 const CommChannelParams& params);

/// Nakagami shape for the given link and blockage state.
double nakagami_shape(LinkKind kind, BlockageState state, const CommChannelParams& params);

BlockageState sample_blockage(double elevation_angle, const CommChannelParams& params,
                              RandomStream& rng);

/// Gamma(m, omega / m) power, i.e. the power of a Nakagami-m envelope with
/// mean omega. Throws std::invalid_argument for m < 0.5.
double sample_fading_power(double shape, double mean_power, RandomStream& rng);

double instantaneous_received_power(double tx_power, const LinkGeometry& geometry,
                                    BlockageState state, double fading, LinkKind kind,
                                    const CommChannelParams& params);

/// Monostatic echo: Pt G(offset)^2 sigma K_r d^{-2 alpha} * fading * processing gain.
double radar_echo_power(double tx_power, const LinkGeometry& target, double offset_angle,
                        double fading, const SensingChannelParams& params);

/// One-way power from a transmitting UAV into the sensing receiver, weighted by
/// the receive beam at its angular offset from boresight.
double sensing_interference_power(double tx_power, const LinkGeometry& geometry,
                                  double offset_angle, double fading,
                                  const SensingChannelParams& params);

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

}  // namespace isac
