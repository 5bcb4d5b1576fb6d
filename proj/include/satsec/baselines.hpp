#pragma once

#include <cstddef>

#include <Eigen/Dense>

#include "satsec/objective.hpp"
#include "satsec/solver.hpp"

namespace satsec {

/// Per-antenna-power analog of maximum ratio transmission: every antenna at
/// full power, phase-aligned with the LU channel.
Beamformer mrt_bf(const ProblemInstance& instance);

/// Copy of `instance` with every eavesdropper grid collapsed to its region
/// center.
ProblemInstance collapse_to_centers(const ProblemInstance& instance);

/// The robust solver run as if each eavesdropper sat exactly at its region
/// center.
SolveResult nonrobust_bf(const ProblemInstance& instance, const SolverParams& params);

struct OracleResult {
  Eigen::VectorXcd best_w;
  double best_objective = 0.0;  // unsmoothed worst-case ratio, lower is better
  std::size_t grid_resolution = 0;
};

/// Exhaustive phase search for N <= 3. Antenna 0 is pinned at phase
/// `reference_phase`; the other phases run over a uniform grid of
/// `phase_steps` points each. Candidates violating the QoS threshold are
/// skipped; ties resolve to the lowest linear index.
OracleResult brute_force_oracle(const ProblemInstance& instance, std::size_t phase_steps,
                                double reference_phase = 0.0);

}  // namespace satsec
