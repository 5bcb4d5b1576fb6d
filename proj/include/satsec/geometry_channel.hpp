#pragma once

// Multibeam GEO downlink channel synthesis.
//
// Geometry is a flat local tangent plane anchored at the sub-satellite point:
// ground positions are (x east, y north) in km at z = 0 and the satellite body
// sits at (0, 0, altitude). Each of the N feed elements drives one beam whose
// boresight is aimed at the matching beam center.

#include <cmath>
#include <complex>
#include <cstddef>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace satsec {

inline constexpr double kSpeedOfLight = 2.99792458e8;  // m/s
inline constexpr double kBoltzmann = 1.38e-23;         // J/K
inline constexpr double kGeoAltitudeKm = 35786.0;
inline constexpr double kPi = 3.14159265358979323846;

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

struct GroundPosition {
  double x_km = 0.0;
  double y_km = 0.0;

  void validate() const;
  friend bool operator==(const GroundPosition&, const GroundPosition&) = default;
};

struct SatelliteGeometry {
  double altitude_km = kGeoAltitudeKm;
  std::vector<Eigen::Vector3d> antenna_offsets_m;
  std::vector<GroundPosition> beam_centers;

  std::size_t num_antennas() const { return beam_centers.size(); }
  void validate() const;

  /// Seven-beam hexagonal cluster (center plus first ring) with feeds laid out
  /// on a matching hexagon of `feed_pitch_m`. Larger n continue on the next
  /// ring in the same angular order.
  static SatelliteGeometry hexagonal(std::size_t n, double beam_pitch_km,
                                     double feed_pitch_m = 1.0,
                                     double altitude_km = kGeoAltitudeKm);
};

struct LinkBudgetParams {
  double carrier_hz = 20e9;
  double b_max = 158489.31924611142;  // 52 dBi
  double phi_3db_rad = 0.4 * kPi / 180.0;
  double g_max_db = 40.0;
  double rain_mu_db = -2.6;
  double rain_sigma_db = 1.63;
  double noise_bandwidth_hz = 250e6;
  double noise_temperature_k = 300.0;

  void validate() const;
};

struct LinkGeometry {
  Eigen::VectorXd distance_km;     // antenna n -> user
  Eigen::VectorXd beam_angle_rad;  // at the satellite, user vs beam center n
  double off_boresight_rad = 0.0;  // user terminal mispointing
};

/// Distances and angles feeding the beam-gain and free-space terms. The user
/// terminal is assumed to track the satellite, so the off-boresight angle is
/// the supplied mispointing (zero by default).
LinkGeometry link_geometry(const SatelliteGeometry& sat, GroundPosition pos,
                           double mispointing_rad = 0.0);

/// First-kind Bessel function, orders 1 and 3 only.
double bessel_j(int order, double x);

/// Linear beam gain at angle `phi_rad` off the beam boresight.
double beam_gain(double phi_rad, const LinkBudgetParams& params);

/// Below this u the beam pattern uses its analytic limit b_max.
inline constexpr double kBeamGainLimitSwitch = 1e-5;

/// User terminal gain mask in dB. Boundary angles (1 deg, 48 deg) belong to the
/// lower interval.
double receiver_gain_db(double theta_rad, double g_max_db);

/// Free-space response c/(4 pi f d) exp(-j 2 pi f d / c), d in km.
std::complex<double> free_space_response(double d_km, double carrier_hz);

/// Per-antenna rain fades r_n = 10^(z/20), z ~ Normal(mu, sigma^2) in dB.
Eigen::VectorXd sample_rain(const LinkBudgetParams& params, std::mt19937_64& rng,
                            std::size_t n);

/// Deterministic fade 10^(mu/20) on every antenna.
Eigen::VectorXd nominal_rain(const LinkBudgetParams& params, std::size_t n);

/// Thermal noise power kappa * B * T in watts.
double noise_variance(const LinkBudgetParams& params);

struct ChannelVector {
  Eigen::VectorXcd h;
  double sigma2 = 1.0;
  Eigen::VectorXcd h_tilde;  // h / sqrt(sigma2)
};

ChannelVector compose_channel(const SatelliteGeometry& sat, GroundPosition pos,
                              const LinkBudgetParams& params,
                              const Eigen::VectorXd& rain,
                              double mispointing_rad = 0.0);

}  // namespace satsec
