#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "satsec/config.hpp"
#include "satsec/geometry_channel.hpp"
#include "satsec/objective.hpp"
#include "satsec/solver.hpp"

namespace satsec {

/// Everything synthesized from a ScenarioConfig for one channel realization.
struct BuiltScenario {
  SatelliteGeometry satellite;
  LinkBudgetParams lu_link;
  LinkBudgetParams eve_link;
  ChannelVector lu_channel;
  ProblemInstance instance;    // optimization grid
  ProblemInstance validation;  // denser, upper-edge-inclusive grid for reporting
};

/// The LU rain is drawn first from a generator seeded with `seed`, followed
/// by one fade vector per eavesdropper region when that policy is sampled.
/// Both grids share the same eavesdropper fades.
BuiltScenario build_scenario(const ScenarioConfig& config, EveMode mode, std::uint64_t seed);

enum class RowStatus { kOk, kInfeasible, kNonConverged };
std::string to_string(RowStatus status);

struct ResultRow {
  double sweep_value = 0.0;
  Scheme scheme = Scheme::kRobust;
  EveMode mode = EveMode::kUncoordinated;
  double asr_worst = 0.0;
  double asr_worst_dense = 0.0;
  double qos_slack = 0.0;
  int iters_outer = 0;
  int iters_inner_total = 0;
  double solve_ms = 0.0;
  RowStatus status = RowStatus::kOk;

  Eigen::VectorXcd w;  // empty when infeasible
  double lu_snr = 0.0;
  double worst_eve_snr = 0.0;
  std::optional<SolverTrace> trace;
};

struct ExperimentResult {
  SweepVariable sweep = SweepVariable::kNone;
  std::vector<ResultRow> rows;

  /// 0 ok, 3 any infeasible row, 4 any non-converged row (infeasible wins).
  int exit_code() const;
};

/// Solves every (sweep point, scheme) pair. All sweep points share the channel
/// realization drawn from spec.seed so that rows differ only in the swept
/// variable. Infeasible points are reported per row and do not abort the run.
ExperimentResult run_experiment(const ExperimentSpec& spec);

/// Applies one sweep value to a copy of the scenario.
ScenarioConfig apply_sweep(const ScenarioConfig& base, SweepVariable variable, double value);

std::string results_csv(const ExperimentResult& result, bool record_timing);
std::string trace_csv(const SolverTrace& trace);

/// Writes results.csv and trace_<row>.csv for every row carrying a trace.
void write_experiment(const ExperimentResult& result, const std::string& output_dir,
                      bool record_timing);

struct BeampatternSample {
  double x_km = 0.0;
  double y_km = 0.0;
  double power_db = 0.0;
};

/// Received power |h_tilde(pos)^H w|^2 (dB) on a resolution x resolution grid
/// spanning the LU and every eavesdropper region with a 10% margin, under
/// nominal rain and the LU receiver's noise. Row-major in y then x.
std::vector<BeampatternSample> emit_beampattern(const Eigen::VectorXcd& w,
                                                const ScenarioConfig& config,
                                                std::size_t resolution);

/// Same surface evaluated at a single position.
double beampattern_power_db(const Eigen::VectorXcd& w, const ScenarioConfig& config,
                            GroundPosition pos);

std::string beampattern_csv(const std::vector<BeampatternSample>& samples);

/// Two antennas, one eavesdropper region, 2 x 2 grid: small enough for the
/// exhaustive phase oracle.
ScenarioConfig oracle_scenario();

}  // namespace satsec
