#pragma once

// Experiment configuration: a JSON document whose keys carry their units
// (power_dbmw, edge_km, ...). Parsing is strict: unknown keys and
// out-of-range values are rejected with the offending field named.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "satsec/geometry_channel.hpp"
#include "satsec/objective.hpp"
#include "satsec/solver.hpp"
#include "satsec/uncertainty.hpp"

namespace satsec {

/// Solver knobs as configured. The ADMM penalty is given per watt of
/// per-antenna power because the curvature of the smoothed objective grows
/// linearly with p.
struct SolverSettings {
  double rho_per_watt = 100.0;
  double epsilon = 1e-4;
  double delta = 1e-5;
  int max_outer = 50;
  int max_inner = 5000;
  LipschitzMode lipschitz_mode = LipschitzMode::kSafeguarded;

  friend bool operator==(const SolverSettings&, const SolverSettings&) = default;
};

struct RegionSpec {
  GroundPosition center;
  double edge_km = 100.0;

  friend bool operator==(const RegionSpec&, const RegionSpec&) = default;
};

/// Scenario values in configuration units; link_budget() and friends convert
/// to the linear quantities the library works in.
struct ScenarioConfig {
  double altitude_km = kGeoAltitudeKm;
  std::vector<GroundPosition> beam_centers_km;
  std::vector<std::array<double, 3>> antenna_offsets_m;

  double carrier_hz = 20e9;
  double b_max_dbi = 52.0;
  double phi_3db_deg = 0.4;
  double g_max_db = 40.0;
  double rain_mu_db = -2.6;
  double rain_sigma_db = 1.63;
  double noise_bandwidth_hz = 250e6;
  double noise_temperature_k = 300.0;
  double eve_noise_bandwidth_hz = 250e6;
  double eve_noise_temperature_k = 300.0;

  GroundPosition lu_position_km;
  double lu_mispointing_deg = 0.0;
  double eve_mispointing_deg = 0.0;
  std::vector<RegionSpec> eve_regions;

  double power_dbmw = 30.0;
  double gamma_th = 5.0;
  bool gamma_th_in_db = false;
  double beta = 100.0;
  std::size_t grid_m1 = 10;
  std::size_t grid_m2 = 10;
  bool grid_inclusive = false;
  std::size_t validation_density = 4;  // per-axis refinement of the dense grid
  RainPolicy eve_rain = RainPolicy::kNominal;
  bool lu_rain_sampled = true;

  SolverSettings solver;

  SatelliteGeometry satellite() const;
  LinkBudgetParams link_budget() const;      // LU receiver
  LinkBudgetParams eve_link_budget() const;  // eavesdropper receivers
  std::vector<EveRegion> regions() const;
  double power_w() const;
  double gamma_th_linear() const;
  SolverParams solver_params() const;

  void validate() const;
  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Shipped default: 7 beams on a 250 km hexagon, LU at the central beam
/// center, three 100 km eavesdropper regions 150-400 km away.
ScenarioConfig default_scenario();

enum class SweepVariable { kNone, kPower, kRegionEdge, kGridDensity };

struct SweepSpec {
  SweepVariable variable = SweepVariable::kNone;
  std::vector<double> values;

  friend bool operator==(const SweepSpec&, const SweepSpec&) = default;
};

enum class Scheme { kRobust, kMrt, kNonRobust };

struct ExperimentSpec {
  ScenarioConfig scenario = default_scenario();
  SweepSpec sweep;
  std::vector<Scheme> schemes{Scheme::kRobust, Scheme::kMrt, Scheme::kNonRobust};
  EveMode mode = EveMode::kUncoordinated;
  std::string output_dir = "out";
  std::uint64_t seed = 42;
  bool record_timing = true;

  void validate() const;
  friend bool operator==(const ExperimentSpec&, const ExperimentSpec&) = default;
};

std::string to_string(Scheme scheme);
std::string to_string(EveMode mode);
std::string to_string(SweepVariable variable);
Scheme parse_scheme(const std::string& text);
EveMode parse_mode(const std::string& text);

/// Throws ConfigError naming the line (syntax) or field (schema/range).
ExperimentSpec parse_config_text(const std::string& text);
ExperimentSpec parse_config(const std::string& path);

/// Pretty-printed JSON that parse_config_text() maps back to the same spec.
std::string serialize_config(const ExperimentSpec& spec);

}  // namespace satsec
