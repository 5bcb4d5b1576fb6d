// satsec: robust secure beamforming simulator for multibeam satellite downlinks.
//
//   satsec solve        --config cfg.json --out dir
//   satsec sweep        --config cfg.json --out dir
//   satsec beampattern  --config cfg.json --out dir [--scheme robust] [--resolution 101]
//   satsec print-defaults
//   satsec oracle-check [--config small.json] [--phase-steps 720]
//
// Exit codes: 0 success, 2 config error, 3 infeasible scenario,
// 4 solver non-convergence on any row.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "satsec/baselines.hpp"
#include "satsec/config.hpp"
#include "satsec/errors.hpp"
#include "satsec/experiment.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitNonConverged = 4;

struct CommonFlags {
  std::string config_path;
  std::optional<std::string> mode;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> schemes;
  bool no_timing = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path, "experiment config (JSON)");
  cmd->add_option("--mode", f.mode, "eavesdropper mode: ue or ce");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--seed", f.seed, "channel realization seed");
  cmd->add_option("--schemes", f.schemes, "comma list of robust,mrt,nonrobust");
  cmd->add_flag("--no-timing", f.no_timing, "write solve_ms as 0 for byte-stable output");
}

satsec::ExperimentSpec load_spec(const CommonFlags& f) {
  satsec::ExperimentSpec spec =
      f.config_path.empty() ? satsec::ExperimentSpec{} : satsec::parse_config(f.config_path);
  if (f.mode) spec.mode = satsec::parse_mode(*f.mode);
  if (f.out) spec.output_dir = *f.out;
  if (f.seed) spec.seed = *f.seed;
  if (f.schemes) {
    spec.schemes.clear();
    std::stringstream list(*f.schemes);
    for (std::string item; std::getline(list, item, ',');) {
      spec.schemes.push_back(satsec::parse_scheme(item));
    }
  }
  if (f.no_timing) spec.record_timing = false;
  spec.validate();
  return spec;
}

int run_and_write(const satsec::ExperimentSpec& spec) {
  const satsec::ExperimentResult result = satsec::run_experiment(spec);
  satsec::write_experiment(result, spec.output_dir, spec.record_timing);
  for (const auto& row : result.rows) {
    std::cout << fmt::format("{:>10} {:>9} {:>3}  asr={:.4f}  dense={:.4f}  slack={:.3g}  {}\n",
                             result.sweep == satsec::SweepVariable::kNone
                                 ? std::string("-")
                                 : fmt::format("{:g}", row.sweep_value),
                             satsec::to_string(row.scheme), satsec::to_string(row.mode),
                             row.asr_worst, row.asr_worst_dense, row.qos_slack,
                             satsec::to_string(row.status));
  }
  return result.exit_code();
}

int cmd_beampattern(const satsec::ExperimentSpec& spec, const std::string& scheme_name,
                    std::size_t resolution) {
  satsec::ExperimentSpec single = spec;
  single.sweep = {};
  single.schemes = {satsec::parse_scheme(scheme_name)};
  const satsec::ExperimentResult result = satsec::run_experiment(single);
  const satsec::ResultRow& row = result.rows.front();
  if (row.status == satsec::RowStatus::kInfeasible) {
    std::cerr << "infeasible scenario: QoS unattainable at the configured power\n";
    return kExitInfeasible;
  }
  const auto samples = satsec::emit_beampattern(row.w, spec.scenario, resolution);
  std::filesystem::create_directories(spec.output_dir);
  std::ofstream out(std::filesystem::path(spec.output_dir) / "beampattern.csv", std::ios::binary);
  out << satsec::beampattern_csv(samples);
  std::cout << fmt::format("wrote {} samples to {}/beampattern.csv\n", samples.size(),
                           spec.output_dir);
  return row.status == satsec::RowStatus::kNonConverged ? kExitNonConverged : 0;
}

int cmd_oracle_check(const CommonFlags& f, std::size_t phase_steps) {
  satsec::ExperimentSpec spec;
  spec.scenario = satsec::oracle_scenario();
  if (!f.config_path.empty()) spec = satsec::parse_config(f.config_path);
  if (f.mode) spec.mode = satsec::parse_mode(*f.mode);
  if (f.seed) spec.seed = *f.seed;

  const satsec::BuiltScenario built = satsec::build_scenario(spec.scenario, spec.mode, spec.seed);
  const satsec::SolveResult solved = satsec::dinkelbach_solve(built.instance, spec.scenario.solver_params());
  const satsec::OracleResult oracle = satsec::brute_force_oracle(built.instance, phase_steps);
  const double solver_objective = satsec::worst_case_ratio(solved.beamformer.w, built.instance);
  const double gap = (solver_objective - oracle.best_objective) / oracle.best_objective;
  const double smoothing =
      std::log(static_cast<double>(built.instance.total_points())) / built.instance.beta;
  const double tolerance = std::max(0.05, smoothing);
  std::cout << fmt::format(
      "solver objective {:.8g}  oracle objective {:.8g}  relative gap {:.3e}  tolerance {:.3e}\n"
      "solver asr {:.6f}  oracle asr {:.6f}\n",
      solver_objective, oracle.best_objective, gap, tolerance,
      satsec::asr(solved.beamformer.w, built.instance), satsec::asr(oracle.best_w, built.instance));
  if (gap > tolerance) {
    std::cout << "FAIL: solver objective outside tolerance of the oracle optimum\n";
    return kExitNonConverged;
  }
  std::cout << "PASS\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust secure beamforming for multibeam satellite downlinks"};
  app.require_subcommand(1);

  CommonFlags flags;
  auto* solve = app.add_subcommand("solve", "solve the configured scenario once");
  add_common(solve, flags);
  auto* sweep = app.add_subcommand("sweep", "run the configured parameter sweep");
  add_common(sweep, flags);
  auto* beam = app.add_subcommand("beampattern", "solve and write beampattern.csv");
  add_common(beam, flags);
  std::string beam_scheme = "robust";
  std::size_t resolution = 101;
  beam->add_option("--scheme", beam_scheme, "scheme whose beamformer is mapped");
  beam->add_option("--resolution", resolution, "samples per axis");
  app.add_subcommand("print-defaults", "print the default config as JSON");
  auto* oracle = app.add_subcommand("oracle-check", "compare the solver with exhaustive search");
  add_common(oracle, flags);
  std::size_t phase_steps = 720;
  oracle->add_option("--phase-steps", phase_steps, "phase grid points per free antenna");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("print-defaults")) {
      std::cout << satsec::serialize_config(satsec::ExperimentSpec{});
      return 0;
    }
    if (app.got_subcommand("oracle-check")) return cmd_oracle_check(flags, phase_steps);

    const satsec::ExperimentSpec spec = load_spec(flags);
    if (app.got_subcommand("beampattern")) return cmd_beampattern(spec, beam_scheme, resolution);
    if (app.got_subcommand("solve")) {
      satsec::ExperimentSpec single = spec;
      single.sweep = {};
      return run_and_write(single);
    }
    return run_and_write(spec);
  } catch (const satsec::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const satsec::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const satsec::DomainError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
}
