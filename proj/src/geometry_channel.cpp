#include "satsec/geometry_channel.hpp"

#include <cmath>
#include <string>

#include "satsec/errors.hpp"

namespace satsec {
namespace {

constexpr double kMaxGroundExtentKm = 10000.0;

// Ascending series for J_n(x) / x^n; free of cancellation for small |x| and
// finite at x = 0.
double scaled_bessel_series(int order, double x) {
  const double q = 0.25 * x * x;
  double factorial_n = 1.0;
  for (int k = 2; k <= order; ++k) factorial_n *= k;
  double term = 1.0 / (std::pow(2.0, order) * factorial_n);
  double sum = term;
  for (int m = 1; m < 200; ++m) {
    term *= -q / (static_cast<double>(m) * static_cast<double>(m + order));
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum) && m > 0.5 * std::abs(x)) break;
  }
  return sum;
}

// Series loses digits to cancellation once |x| grows; beyond this the
// standard library's asymptotic/recurrence evaluation takes over.
constexpr double kSeriesLimit = 8.0;

double vector_angle(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

Eigen::Vector3d ground_point_km(GroundPosition pos) {
  return {pos.x_km, pos.y_km, 0.0};
}

}  // namespace

void GroundPosition::validate() const {
  if (!std::isfinite(x_km) || !std::isfinite(y_km) ||
      std::abs(x_km) > kMaxGroundExtentKm || std::abs(y_km) > kMaxGroundExtentKm) {
    throw DomainError("ground position outside +/-10000 km: (" +
                      std::to_string(x_km) + ", " + std::to_string(y_km) + ")");
  }
}

void SatelliteGeometry::validate() const {
  if (!(altitude_km > 0.0)) throw DomainError("altitude_km must be > 0");
  if (beam_centers.empty()) throw DomainError("at least one antenna required");
  if (antenna_offsets_m.size() != beam_centers.size()) {
    throw DomainError("need one beam center per antenna offset");
  }
  for (const auto& c : beam_centers) c.validate();
}

SatelliteGeometry SatelliteGeometry::hexagonal(std::size_t n, double beam_pitch_km,
                                               double feed_pitch_m,
                                               double altitude_km) {
  std::vector<Eigen::Vector2d> unit_cells{{0.0, 0.0}};
  for (int ring = 1; unit_cells.size() < n; ++ring) {
    for (int side = 0; side < 6; ++side) {
      const double a0 = deg_to_rad(60.0 * side);
      const double a1 = deg_to_rad(60.0 * (side + 1));
      const Eigen::Vector2d c0(std::cos(a0), std::sin(a0));
      const Eigen::Vector2d c1(std::cos(a1), std::sin(a1));
      for (int step = 0; step < ring; ++step) {
        unit_cells.push_back(ring * c0 + step * (c1 - c0));
      }
    }
  }
  SatelliteGeometry sat;
  sat.altitude_km = altitude_km;
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Vector2d& u = unit_cells[i];
    sat.antenna_offsets_m.emplace_back(feed_pitch_m * u.x(), feed_pitch_m * u.y(), 0.0);
    sat.beam_centers.push_back({beam_pitch_km * u.x(), beam_pitch_km * u.y()});
  }
  return sat;
}

void LinkBudgetParams::validate() const {
  if (!(carrier_hz > 0.0)) throw DomainError("carrier_hz must be > 0");
  if (!(b_max > 0.0)) throw DomainError("b_max must be > 0");
  if (!(phi_3db_rad > 0.0 && phi_3db_rad < kPi / 2)) {
    throw DomainError("phi_3db must lie in (0, pi/2)");
  }
  if (!(g_max_db > 0.0)) throw DomainError("g_max_db must be > 0");
  if (!std::isfinite(rain_mu_db)) throw DomainError("rain_mu_db must be finite");
  if (!(rain_sigma_db >= 0.0)) throw DomainError("rain_sigma_db must be >= 0");
  if (!(noise_bandwidth_hz > 0.0)) throw DomainError("noise_bandwidth_hz must be > 0");
  if (!(noise_temperature_k > 0.0)) throw DomainError("noise_temperature_k must be > 0");
}

LinkGeometry link_geometry(const SatelliteGeometry& sat, GroundPosition pos,
                           double mispointing_rad) {
  const std::size_t n = sat.num_antennas();
  const Eigen::Vector3d center(0.0, 0.0, sat.altitude_km);
  const Eigen::Vector3d user = ground_point_km(pos);
  const Eigen::Vector3d to_user = user - center;
  if (to_user.norm() == 0.0) throw DomainError("user coincides with satellite");

  LinkGeometry g;
  g.distance_km.resize(static_cast<Eigen::Index>(n));
  g.beam_angle_rad.resize(static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) {
    const auto i = static_cast<Eigen::Index>(k);
    const Eigen::Vector3d antenna = center + 1e-3 * sat.antenna_offsets_m[k];
    g.distance_km(i) = (user - antenna).norm();
    const Eigen::Vector3d to_beam = ground_point_km(sat.beam_centers[k]) - center;
    g.beam_angle_rad(i) = vector_angle(to_user, to_beam);
  }
  g.off_boresight_rad = std::abs(mispointing_rad);
  return g;
}

double bessel_j(int order, double x) {
  if (order != 1 && order != 3) {
    throw DomainError("bessel_j supports orders 1 and 3, got " + std::to_string(order));
  }
  if (std::abs(x) <= kSeriesLimit) {
    return std::pow(x, order) * scaled_bessel_series(order, x);
  }
  // Odd orders: J_n(-x) = -J_n(x).
  const double value = std::cyl_bessel_j(static_cast<double>(order), std::abs(x));
  return x < 0.0 ? -value : value;
}

double beam_gain(double phi_rad, const LinkBudgetParams& params) {
  const double u = 2.07123 * std::sin(phi_rad) / std::sin(params.phi_3db_rad);
  if (std::abs(u) < kBeamGainLimitSwitch) return params.b_max;
  double pattern = 0.0;
  if (std::abs(u) <= kSeriesLimit) {
    // J1(u)/(2u) + 36 J3(u)/u^3 from the scaled series directly.
    pattern = 0.5 * scaled_bessel_series(1, u) + 36.0 * scaled_bessel_series(3, u);
  } else {
    pattern = bessel_j(1, u) / (2.0 * u) + 36.0 * bessel_j(3, u) / (u * u * u);
  }
  return params.b_max * pattern * pattern;
}

double receiver_gain_db(double theta_rad, double g_max_db) {
  const double deg = rad_to_deg(std::abs(theta_rad));
  if (deg <= 1.0) return g_max_db;
  if (deg <= 48.0) return 32.0 - 25.0 * std::log10(deg);
  return -10.0;
}

std::complex<double> free_space_response(double d_km, double carrier_hz) {
  if (!(d_km > 0.0)) throw DomainError("distance must be > 0");
  const double d_m = 1e3 * d_km;
  const double magnitude = kSpeedOfLight / (4.0 * kPi * carrier_hz * d_m);
  // Reduce the (large) phase in cycles before scaling by 2 pi.
  const double cycles = carrier_hz * d_m / kSpeedOfLight;
  const double frac = cycles - std::floor(cycles);
  return std::polar(magnitude, -2.0 * kPi * frac);
}

Eigen::VectorXd sample_rain(const LinkBudgetParams& params, std::mt19937_64& rng,
                            std::size_t n) {
  if (n == 0) throw DomainError("sample_rain needs n >= 1");
  Eigen::VectorXd r(static_cast<Eigen::Index>(n));
  if (params.rain_sigma_db == 0.0) {
    r.setConstant(std::pow(10.0, params.rain_mu_db / 20.0));
    return r;
  }
  std::normal_distribution<double> fade_db(params.rain_mu_db, params.rain_sigma_db);
  for (Eigen::Index i = 0; i < r.size(); ++i) r(i) = std::pow(10.0, fade_db(rng) / 20.0);
  return r;
}

Eigen::VectorXd nominal_rain(const LinkBudgetParams& params, std::size_t n) {
  return Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n),
                                   std::pow(10.0, params.rain_mu_db / 20.0));
}

double noise_variance(const LinkBudgetParams& params) {
  return kBoltzmann * params.noise_bandwidth_hz * params.noise_temperature_k;
}

ChannelVector compose_channel(const SatelliteGeometry& sat, GroundPosition pos,
                              const LinkBudgetParams& params,
                              const Eigen::VectorXd& rain, double mispointing_rad) {
  const auto n = static_cast<Eigen::Index>(sat.num_antennas());
  if (rain.size() != n) throw DomainError("rain vector length must equal antenna count");

  const LinkGeometry g = link_geometry(sat, pos, mispointing_rad);
  const double receiver_amp =
      std::sqrt(db_to_linear(receiver_gain_db(g.off_boresight_rad, params.g_max_db)));

  ChannelVector ch;
  ch.h.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double amp = receiver_amp / std::sqrt(rain(i)) *
                       std::sqrt(beam_gain(g.beam_angle_rad(i), params));
    ch.h(i) = amp * free_space_response(g.distance_km(i), params.carrier_hz);
  }
  ch.sigma2 = noise_variance(params);
  ch.h_tilde = ch.h / std::sqrt(ch.sigma2);
  return ch;
}

}  // namespace satsec
