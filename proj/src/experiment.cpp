#include "satsec/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include <fmt/format.h>

#include "satsec/baselines.hpp"
#include "satsec/errors.hpp"

namespace satsec {
namespace {

std::string number(double v) {
  if (std::isnan(v)) return "nan";
  return fmt::format("{:.10g}", v);
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

ResultRow evaluate_row(const BuiltScenario& built, const Eigen::VectorXcd& w) {
  ResultRow row;
  row.w = w;
  row.asr_worst = asr(w, built.instance);
  row.asr_worst_dense = asr(w, built.validation);
  row.lu_snr = snr(w, built.instance.h_tilde_s);
  row.worst_eve_snr = worst_eve_snr(w, built.instance);
  row.qos_slack = row.lu_snr - built.instance.gamma_th;
  return row;
}

ResultRow infeasible_row() {
  ResultRow row;
  row.status = RowStatus::kInfeasible;
  row.asr_worst = row.asr_worst_dense = row.qos_slack = std::nan("");
  return row;
}

ResultRow run_scheme(const BuiltScenario& built, Scheme scheme, const SolverParams& params) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  ResultRow row;
  try {
    if (scheme == Scheme::kMrt) {
      const Beamformer bf = mrt_bf(built.instance);
      const double elapsed = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
      row = evaluate_row(built, bf.w);
      row.solve_ms = elapsed;
      if (row.qos_slack < 0.0) row.status = RowStatus::kInfeasible;
      return row;
    }
    SolveResult solved = scheme == Scheme::kRobust ? dinkelbach_solve(built.instance, params)
                                                   : nonrobust_bf(built.instance, params);
    const double elapsed = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    row = evaluate_row(built, solved.beamformer.w);
    row.solve_ms = elapsed;
    row.iters_outer = solved.outer_iterations;
    row.iters_inner_total = solved.inner_iterations_total;
    row.status = solved.converged() ? RowStatus::kOk : RowStatus::kNonConverged;
    row.trace = std::move(solved.trace);
  } catch (const InfeasibleError&) {
    row = infeasible_row();
  }
  return row;
}

}  // namespace

BuiltScenario build_scenario(const ScenarioConfig& config, EveMode mode, std::uint64_t seed) {
  config.validate();
  BuiltScenario built;
  built.satellite = config.satellite();
  built.satellite.validate();
  built.lu_link = config.link_budget();
  built.eve_link = config.eve_link_budget();
  built.lu_link.validate();
  built.eve_link.validate();

  const std::size_t n = built.satellite.num_antennas();
  std::mt19937_64 rng(seed);
  const Eigen::VectorXd lu_rain = config.lu_rain_sampled ? sample_rain(built.lu_link, rng, n)
                                                         : nominal_rain(built.lu_link, n);
  built.lu_channel = compose_channel(built.satellite, config.lu_position_km, built.lu_link, lu_rain,
                                     deg_to_rad(config.lu_mispointing_deg));

  const std::vector<EveRegion> regions = config.regions();
  GridOptions grid;
  grid.m1 = config.grid_m1;
  grid.m2 = config.grid_m2;
  grid.edge = config.grid_inclusive ? GridEdge::kInclusive : GridEdge::kExclusive;
  grid.rain = config.eve_rain;
  grid.mispointing_rad = deg_to_rad(config.eve_mispointing_deg);
  GridOptions dense = grid;
  dense.m1 *= config.validation_density;
  dense.m2 *= config.validation_density;
  dense.edge = GridEdge::kInclusive;

  std::mt19937_64 dense_rng = rng;  // identical eavesdropper fades on both grids
  ProblemInstance instance;
  instance.h_tilde_s = built.lu_channel.h_tilde;
  instance.eve_grids = grid_channels(built.satellite, built.eve_link, regions, grid, &rng);
  instance.gamma_th = config.gamma_th_linear();
  instance.power_w = config.power_w();
  instance.beta = config.beta;
  instance.mode = mode;
  instance.validate();

  built.validation = instance;
  built.validation.eve_grids =
      grid_channels(built.satellite, built.eve_link, regions, dense, &dense_rng);
  built.instance = std::move(instance);
  return built;
}

std::string to_string(RowStatus status) {
  switch (status) {
    case RowStatus::kOk: return "ok";
    case RowStatus::kInfeasible: return "infeasible";
    case RowStatus::kNonConverged: return "nonconverged";
  }
  return "?";
}

int ExperimentResult::exit_code() const {
  const auto has = [&](RowStatus s) {
    return std::any_of(rows.begin(), rows.end(), [&](const ResultRow& r) { return r.status == s; });
  };
  if (has(RowStatus::kInfeasible)) return 3;
  if (has(RowStatus::kNonConverged)) return 4;
  return 0;
}

ScenarioConfig apply_sweep(const ScenarioConfig& base, SweepVariable variable, double value) {
  ScenarioConfig c = base;
  switch (variable) {
    case SweepVariable::kNone:
      break;
    case SweepVariable::kPower:
      c.power_dbmw = value;
      break;
    case SweepVariable::kRegionEdge:
      for (auto& r : c.eve_regions) r.edge_km = value;
      break;
    case SweepVariable::kGridDensity:
      c.grid_m1 = c.grid_m2 = static_cast<std::size_t>(value);
      break;
  }
  return c;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  ExperimentResult result;
  result.sweep = spec.sweep.variable;
  const std::vector<double> points =
      spec.sweep.variable == SweepVariable::kNone ? std::vector<double>{0.0} : spec.sweep.values;

  for (double value : points) {
    const ScenarioConfig config = apply_sweep(spec.scenario, spec.sweep.variable, value);
    const BuiltScenario built = build_scenario(config, spec.mode, spec.seed);
    for (Scheme scheme : spec.schemes) {
      ResultRow row = run_scheme(built, scheme, config.solver_params());
      row.sweep_value = value;
      row.scheme = scheme;
      row.mode = spec.mode;
      result.rows.push_back(std::move(row));
    }
  }
  return result;
}

std::string results_csv(const ExperimentResult& result, bool record_timing) {
  std::string out =
      "sweep_var,scheme,mode,asr_worst,asr_worst_dense,qos_slack,iters_outer,"
      "iters_inner_total,solve_ms,status\n";
  for (const ResultRow& row : result.rows) {
    const std::string sweep =
        result.sweep == SweepVariable::kNone ? "none" : number(row.sweep_value);
    out += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", sweep, to_string(row.scheme),
                       to_string(row.mode), number(row.asr_worst), number(row.asr_worst_dense),
                       number(row.qos_slack), row.iters_outer, row.iters_inner_total,
                       record_timing ? fmt::format("{:.3f}", row.solve_ms) : std::string("0"),
                       to_string(row.status));
  }
  return out;
}

std::string trace_csv(const SolverTrace& trace) {
  std::string out = "outer,inner,eta,residual,augmented_lagrangian,qos_slack,lipschitz\n";
  for (const InnerRecord& r : trace.inner) {
    const double eta = trace.outer.at(static_cast<std::size_t>(r.outer)).eta;
    out += fmt::format("{},{},{},{},{},{},{}\n", r.outer, r.inner, number(eta), number(r.residual),
                       number(r.augmented_lagrangian), number(r.qos_slack), number(r.lipschitz));
  }
  return out;
}

void write_experiment(const ExperimentResult& result, const std::string& output_dir,
                      bool record_timing) {
  const std::filesystem::path dir(output_dir);
  std::filesystem::create_directories(dir);
  write_file(dir / "results.csv", results_csv(result, record_timing));
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    if (result.rows[i].trace) {
      write_file(dir / fmt::format("trace_{}.csv", i), trace_csv(*result.rows[i].trace));
    }
  }
}

double beampattern_power_db(const Eigen::VectorXcd& w, const ScenarioConfig& config,
                            GroundPosition pos) {
  const SatelliteGeometry sat = config.satellite();
  const LinkBudgetParams link = config.link_budget();
  const ChannelVector ch = compose_channel(sat, pos, link, nominal_rain(link, sat.num_antennas()));
  return linear_to_db(std::max(snr(w, ch.h_tilde), 1e-300));
}

std::vector<BeampatternSample> emit_beampattern(const Eigen::VectorXcd& w,
                                                const ScenarioConfig& config,
                                                std::size_t resolution) {
  if (resolution < 2) throw DomainError("beampattern resolution must be >= 2");
  const SatelliteGeometry sat = config.satellite();
  if (static_cast<std::size_t>(w.size()) != sat.num_antennas()) {
    throw DomainError("beamformer length does not match antenna count");
  }
  double x_lo = config.lu_position_km.x_km, x_hi = x_lo;
  double y_lo = config.lu_position_km.y_km, y_hi = y_lo;
  for (const EveRegion& r : config.regions()) {
    x_lo = std::min(x_lo, r.x_lower_km);
    x_hi = std::max(x_hi, r.x_upper_km);
    y_lo = std::min(y_lo, r.y_lower_km);
    y_hi = std::max(y_hi, r.y_upper_km);
  }
  const double mx = 0.1 * std::max(x_hi - x_lo, 1.0);
  const double my = 0.1 * std::max(y_hi - y_lo, 1.0);
  x_lo -= mx;
  x_hi += mx;
  y_lo -= my;
  y_hi += my;

  const LinkBudgetParams link = config.link_budget();
  const Eigen::VectorXd rain = nominal_rain(link, sat.num_antennas());
  std::vector<BeampatternSample> samples;
  samples.reserve(resolution * resolution);
  const double steps = static_cast<double>(resolution - 1);
  for (std::size_t iy = 0; iy < resolution; ++iy) {
    const double y = y_lo + (y_hi - y_lo) * static_cast<double>(iy) / steps;
    for (std::size_t ix = 0; ix < resolution; ++ix) {
      const double x = x_lo + (x_hi - x_lo) * static_cast<double>(ix) / steps;
      const ChannelVector ch = compose_channel(sat, {x, y}, link, rain);
      samples.push_back({x, y, linear_to_db(std::max(snr(w, ch.h_tilde), 1e-300))});
    }
  }
  return samples;
}

std::string beampattern_csv(const std::vector<BeampatternSample>& samples) {
  std::string out = "x_km,y_km,power_db\n";
  for (const auto& s : samples) {
    out += fmt::format("{},{},{}\n", number(s.x_km), number(s.y_km), number(s.power_db));
  }
  return out;
}

ScenarioConfig oracle_scenario() {
  ScenarioConfig c = default_scenario();
  c.beam_centers_km = {{0.0, 0.0}, {250.0, 0.0}};
  c.antenna_offsets_m = {{0.0, 0.0, 0.0}, {1.0, 0.0, 0.0}};
  c.eve_regions = {{{150.0, 150.0}, 100.0}};
  c.grid_m1 = 2;
  c.grid_m2 = 2;
  return c;
}

}  // namespace satsec
