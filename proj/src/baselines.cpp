#include "satsec/baselines.hpp"

#include <cmath>
#include <complex>
#include <limits>

#include "satsec/errors.hpp"

namespace satsec {

Beamformer mrt_bf(const ProblemInstance& instance) {
  if (instance.h_tilde_s.size() == 0 || instance.h_tilde_s.isZero(0.0)) {
    throw DomainError("MRT needs a nonzero LU channel");
  }
  return {project_constant_modulus(instance.h_tilde_s, instance.power_w), instance.power_w};
}

ProblemInstance collapse_to_centers(const ProblemInstance& instance) {
  ProblemInstance collapsed = instance;
  for (auto& grid : collapsed.eve_grids) {
    grid.m1 = 1;
    grid.m2 = 1;
    grid.points = {grid.region.center()};
    grid.channels = grid.center_channel;
  }
  return collapsed;
}

SolveResult nonrobust_bf(const ProblemInstance& instance, const SolverParams& params) {
  return dinkelbach_solve(collapse_to_centers(instance), params);
}

OracleResult brute_force_oracle(const ProblemInstance& instance, std::size_t phase_steps,
                                double reference_phase) {
  instance.validate();
  const std::size_t n = instance.num_antennas();
  if (n > 3) throw DomainError("brute_force_oracle supports N <= 3");
  if (phase_steps == 0 || phase_steps > 720) {
    throw DomainError("phase_steps must lie in [1, 720]");
  }

  const double amp = std::sqrt(instance.power_w);
  const std::size_t free = n - 1;
  std::size_t total = 1;
  for (std::size_t k = 0; k < free; ++k) total *= phase_steps;

  OracleResult best;
  best.best_objective = std::numeric_limits<double>::infinity();
  best.grid_resolution = phase_steps;

  Eigen::VectorXcd w(static_cast<Eigen::Index>(n));
  w(0) = std::polar(amp, reference_phase);
  for (std::size_t index = 0; index < total; ++index) {
    std::size_t rest = index;
    for (std::size_t k = 1; k < n; ++k) {
      const std::size_t step = rest % phase_steps;
      rest /= phase_steps;
      const double phase =
          reference_phase + 2.0 * kPi * static_cast<double>(step) / static_cast<double>(phase_steps);
      w(static_cast<Eigen::Index>(k)) = std::polar(amp, phase);
    }
    if (snr(w, instance.h_tilde_s) < instance.gamma_th) continue;
    const double objective = worst_case_ratio(w, instance);
    if (objective < best.best_objective) {
      best.best_objective = objective;
      best.best_w = w;
    }
  }
  if (best.best_w.size() == 0) throw InfeasibleError("no phase-grid point meets the QoS threshold");
  return best;
}

}  // namespace satsec
