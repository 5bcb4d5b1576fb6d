// Acceptance suite: one PASS/FAIL line per criterion, default scenario and
// seed 42 unless a criterion says otherwise. Exit status is the number of
// failed criteria.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "satsec/baselines.hpp"
#include "satsec/config.hpp"
#include "satsec/experiment.hpp"
#include "satsec/solver.hpp"
#include "test_support.hpp"

using namespace satsec;
namespace st = satsec::testing;

namespace {

constexpr std::uint64_t kSeed = 42;

struct Outcome {
  bool pass = false;
  std::string detail;
};

const EveMode kModes[] = {EveMode::kUncoordinated, EveMode::kCoordinated};

BuiltScenario default_built(EveMode mode) {
  return build_scenario(default_scenario(), mode, kSeed);
}

Outcome constraint_exactness() {
  double worst_modulus = 0.0, worst_qos = INFINITY;
  for (EveMode mode : kModes) {
    const BuiltScenario b = default_built(mode);
    const SolveResult r = dinkelbach_solve(b.instance, default_scenario().solver_params());
    worst_modulus = std::max(worst_modulus, r.beamformer.max_modulus_error());
    worst_qos = std::min(worst_qos, snr(r.beamformer.w, b.instance.h_tilde_s) /
                                        b.instance.gamma_th);
  }
  return {worst_modulus <= 1e-9 && worst_qos >= 1.0 - 1e-6,
          fmt::format("max modulus error {:.2e}, min LU SNR / gamma_th {:.9f}", worst_modulus,
                      worst_qos)};
}

Outcome gradient_correctness() {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> eta(0.0, 2.0);
  double worst = 0.0;
  for (EveMode mode : kModes) {
    const BuiltScenario b = default_built(mode);
    const auto n = b.instance.num_antennas();
    for (int t = 0; t < 20; ++t) {
      const Eigen::VectorXcd w = st::random_unimodular(n, rng, b.instance.power_w);
      const Eigen::VectorXcd d = st::random_complex(n, rng);
      worst = std::max(worst, st::gradient_fd_error(b.instance, w, d, eta(rng)));
    }
  }
  return {worst <= 1e-5, fmt::format("max relative error {:.2e} over 40 triples", worst)};
}

Outcome lse_sandwich() {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> value(-100.0, 100.0);
  std::uniform_int_distribution<int> length(1, 200);
  int violations = 0;
  for (int t = 0; t < 100; ++t) {
    std::vector<double> v(static_cast<std::size_t>(length(rng)));
    for (double& x : v) x = value(rng);
    const double top = *std::max_element(v.begin(), v.end());
    for (double beta : {1.0, 10.0, 100.0}) {
      const double s = lse(v, beta);
      if (!(top <= s && s <= top + std::log(static_cast<double>(v.size())) / beta)) ++violations;
    }
  }
  return {violations == 0, fmt::format("{} violations in 300 evaluations", violations)};
}

Outcome projection_oracles() {
  const BuiltScenario b = default_built(EveMode::kUncoordinated);
  const ProblemInstance& inst = b.instance;
  const auto n = inst.num_antennas();
  const SolverParams params = default_scenario().solver_params();
  std::mt19937_64 rng(4);

  int x_mismatch = 0;
  for (int t = 0; t < 50; ++t) {
    AdmmState s;
    s.w_tilde = st::random_complex(n, rng);
    s.v = st::random_complex(n, rng, 10.0);
    s.x = st::random_unimodular(n, rng, inst.power_w);
    const Eigen::VectorXcd x = update_x(s, params, inst.power_w);
    const Eigen::VectorXcd u = s.w_tilde + s.v / params.rho;
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      if (x(i) != std::sqrt(inst.power_w) * u(i) / std::abs(u(i))) ++x_mismatch;
    }
  }

  // Steer c = x - (grad + v) / (rho + L) to a random infeasible target.
  const Eigen::VectorXcd hs = inst.h_tilde_s;
  const Eigen::VectorXcd unit = hs / hs.norm();
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    AdmmState s;
    s.x = st::random_unimodular(n, rng, inst.power_w);
    s.eta = 0.5;
    s.lipschitz = 7.0;
    Eigen::VectorXcd target = st::random_complex(n, rng);
    const std::complex<double> along = unit.dot(target);
    std::uniform_real_distribution<double> shrink(0.0, 0.9);
    const double cap = std::sqrt(inst.gamma_th) / hs.norm();
    target += (shrink(rng) * cap / std::max(std::abs(along), 1e-300) - 1.0) * along * unit;
    s.v = (params.rho + s.lipschitz) * (s.x - target) - gamma_gradient(s.x, inst, s.eta);
    const Eigen::VectorXcd c =
        s.x - (gamma_gradient(s.x, inst, s.eta) + s.v) / (params.rho + s.lipschitz);
    if (std::norm(hs.dot(c)) >= inst.gamma_th) return {false, "constructed c is feasible"};
    const Eigen::VectorXcd w = update_w(s, inst, params);
    worst = std::max(worst, (w - st::sweep_qos_projection(c, hs, inst.gamma_th)).norm());
  }
  return {x_mismatch == 0 && worst <= 1e-6,
          fmt::format("x-update mismatches {}, max distance to sweep oracle {:.2e}", x_mismatch,
                      worst)};
}

Outcome oracle_equivalence() {
  const ScenarioConfig c = oracle_scenario();
  const BuiltScenario b = build_scenario(c, EveMode::kUncoordinated, kSeed);
  const SolveResult r = dinkelbach_solve(b.instance, c.solver_params());
  const OracleResult o = brute_force_oracle(b.instance, 720);
  const double solver = worst_case_ratio(r.beamformer.w, b.instance);
  const double gap = (solver - o.best_objective) / o.best_objective;
  const double tol = std::max(0.05, std::log(double(b.instance.total_points())) / b.instance.beta);
  return {gap <= tol, fmt::format("solver {:.8g}, oracle {:.8g}, relative gap {:.2e} (tol {:.2e})",
                                  solver, o.best_objective, gap, tol)};
}

ExperimentResult run(EveMode mode, SweepVariable var, std::vector<double> values,
                     std::vector<Scheme> schemes) {
  ExperimentSpec spec;
  spec.mode = mode;
  spec.seed = kSeed;
  spec.sweep = {var, std::move(values)};
  spec.schemes = std::move(schemes);
  spec.record_timing = false;
  return run_experiment(spec);
}

Outcome power_ordering() {
  std::string detail;
  bool ok = true;
  for (EveMode mode : kModes) {
    const ExperimentResult r = run(mode, SweepVariable::kPower, {25.0, 30.0, 35.0},
                                   {Scheme::kRobust, Scheme::kMrt, Scheme::kNonRobust});
    for (std::size_t i = 0; i < r.rows.size(); i += 3) {
      const double robust = r.rows[i].asr_worst, mrt = r.rows[i + 1].asr_worst,
                   plain = r.rows[i + 2].asr_worst;
      const bool status = r.rows[i].status == RowStatus::kOk &&
                          r.rows[i + 2].status == RowStatus::kOk;
      ok = ok && status && robust >= plain - 1e-6 && plain >= 0.0 && robust >= mrt - 1e-6;
      detail += fmt::format("{}@{:g}: {:.3f}/{:.3f}/{:.3f} ", to_string(mode),
                            r.rows[i].sweep_value, robust, plain, mrt);
    }
  }
  return {ok, detail + "(robust/nonrobust/mrt)"};
}

Outcome edge_trend() {
  std::string detail;
  bool ok = true;
  for (EveMode mode : kModes) {
    const ExperimentResult r =
        run(mode, SweepVariable::kRegionEdge, {50.0, 100.0, 200.0}, {Scheme::kRobust});
    detail += to_string(mode) + ":";
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
      ok = ok && r.rows[i].status == RowStatus::kOk;
      if (i > 0) ok = ok && r.rows[i].asr_worst <= r.rows[i - 1].asr_worst + 1e-3;
      detail += fmt::format(" {:.3f}", r.rows[i].asr_worst);
    }
    detail += "  ";
  }
  return {ok, detail + "(edges 50/100/200 km)"};
}

Outcome beampattern_property() {
  const ScenarioConfig c = default_scenario();
  const BuiltScenario b = default_built(EveMode::kUncoordinated);
  const SolveResult r = dinkelbach_solve(b.instance, c.solver_params());
  const Eigen::VectorXcd& w = r.beamformer.w;
  const auto samples = emit_beampattern(w, c, 201);
  const double at_lu = beampattern_power_db(w, c, c.lu_position_km);
  double near_peak = -INFINITY;
  for (const auto& s : samples) {
    if (std::hypot(s.x_km - c.lu_position_km.x_km, s.y_km - c.lu_position_km.y_km) <= 50.0) {
      near_peak = std::max(near_peak, s.power_db);
    }
  }
  const double robust_eve = worst_eve_snr(w, b.instance);
  const double mrt_eve = worst_eve_snr(mrt_bf(b.instance).w, b.instance);
  return {near_peak - at_lu <= 0.5 && robust_eve <= mrt_eve,
          fmt::format("peak within 50 km exceeds LU by {:.3f} dB; worst Eve SNR robust {:.4g} vs "
                      "MRT {:.4g}",
                      near_peak - at_lu, robust_eve, mrt_eve)};
}

Outcome convergence_bookkeeping() {
  const SolverParams params = default_scenario().solver_params();
  std::string detail;
  bool ok = true;
  double worst_ratio = 0.0, worst_bound_use = 0.0;
  std::mt19937_64 rng(9);
  for (EveMode mode : kModes) {
    const BuiltScenario b = default_built(mode);
    const SolveResult r = dinkelbach_solve(b.instance, params);
    int max_inner = 0;
    for (const auto& o : r.trace.outer) {
      max_inner = std::max(max_inner, o.inner_iterations);
      ok = ok && o.inner_converged && o.inner_iterations <= 5000;
    }
    ok = ok && r.outer_converged && r.outer_iterations <= 50;
    detail += fmt::format("{}: {} outer, max inner {}, final |d eta| {:.1e}; ", to_string(mode),
                          r.outer_iterations, max_inner,
                          r.trace.outer.size() > 1
                              ? std::abs(r.trace.outer.back().eta -
                                         r.trace.outer[r.trace.outer.size() - 2].eta)
                              : 0.0);

    const double eta = r.trace.outer.back().eta;
    const double bound = lipschitz_bound(b.instance, eta);
    const auto n = b.instance.num_antennas();
    const double radius = std::sqrt(b.instance.power_w * static_cast<double>(n));
    for (int t = 0; t < 1000; ++t) {
      Eigen::VectorXcd a = t % 2 == 0 ? st::random_unimodular(n, rng, b.instance.power_w)
                                      : st::random_complex(n, rng, radius / std::sqrt(double(n)));
      Eigen::VectorXcd c = a + st::random_complex(n, rng, t % 3 == 0 ? 1e-4 : 0.3);
      a *= std::min(1.0, radius / a.norm());
      c *= std::min(1.0, radius / c.norm());
      const double ratio =
          (gamma_gradient(a, b.instance, eta) - gamma_gradient(c, b.instance, eta)).norm() /
          (a - c).norm();
      worst_ratio = std::max(worst_ratio, ratio);
      worst_bound_use = std::max(worst_bound_use, ratio / bound);
      ok = ok && ratio <= bound;
    }
  }
  return {ok, detail + fmt::format("max empirical L / bound {:.2e}", worst_bound_use)};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  const auto base = std::filesystem::temp_directory_path() / "satsec_acceptance_det";
  std::filesystem::remove_all(base);
  ExperimentSpec spec;
  spec.seed = kSeed;
  spec.sweep = {SweepVariable::kPower, {25.0, 30.0, 35.0}};
  spec.record_timing = false;
  for (const char* run_name : {"a", "b"}) {
    spec.output_dir = (base / run_name).string();
    write_experiment(run_experiment(spec), spec.output_dir, spec.record_timing);
  }
  int files = 0, differing = 0;
  for (const auto& entry : std::filesystem::directory_iterator(base / "a")) {
    ++files;
    const auto name = entry.path().filename();
    if (!std::filesystem::exists(base / "b" / name) ||
        slurp(base / "a" / name) != slurp(base / "b" / name)) {
      ++differing;
    }
  }
  std::filesystem::remove_all(base);
  return {files > 0 && differing == 0,
          fmt::format("{} CSV files compared, {} differ", files, differing)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;  // 0: no runtime bound
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "constraint exactness", 10.0, constraint_exactness},
      {2, "gradient correctness", 5.0, gradient_correctness},
      {3, "lse sandwich", 1.0, lse_sandwich},
      {4, "projection oracles", 30.0, projection_oracles},
      {5, "oracle equivalence", 60.0, oracle_equivalence},
      {6, "power ordering", 300.0, power_ordering},
      {7, "region edge trend", 300.0, edge_trend},
      {8, "beampattern and Eve SNR", 120.0, beampattern_property},
      {9, "convergence bookkeeping", 0.0, convergence_bookkeeping},
      {10, "determinism", 0.0, determinism},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = c.limit_s == 0.0 || secs < c.limit_s;
    const bool pass = out.pass && in_time;
    if (!pass) ++failed;
    std::cout << fmt::format("{} [{}] {}: {} ({:.2f} s{})\n", pass ? "PASS" : "FAIL", c.id, c.name,
                             out.detail, secs,
                             in_time ? "" : fmt::format(", over {:g} s limit", c.limit_s))
              << std::flush;
  }
  std::cout << fmt::format("{} of {} criteria passed\n", criteria.size() - failed, criteria.size());
  return failed;
}
