#pragma once

// Robust beamforming solver: a Dinkelbach outer loop over the smoothed
// fractional objective, each parametric subproblem solved by non-convex ADMM
// that splits the QoS constraint (w_tilde) from the constant-modulus
// constraint (x) and couples them through a scaled dual v.

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "satsec/objective.hpp"

namespace satsec {

/// kAnalytic uses lipschitz_bound() for the proximal weight L throughout.
/// kSafeguarded starts from the curvature of the quadratic terms alone and
/// doubles L (up to the analytic bound) whenever the linearized model fails to
/// majorize Gamma along the step just taken.
enum class LipschitzMode { kAnalytic, kSafeguarded };

struct SolverParams {
  double rho = 100.0;
  double epsilon = 1e-4;  // Dinkelbach |delta eta| tolerance
  double delta = 1e-5;    // ADMM ||w_tilde - x|| tolerance
  int max_outer = 50;
  int max_inner = 5000;
  LipschitzMode lipschitz_mode = LipschitzMode::kSafeguarded;

  void validate() const;
  friend bool operator==(const SolverParams&, const SolverParams&) = default;
};

struct InnerRecord {
  int outer = 0;
  int inner = 0;
  double residual = 0.0;  // ||w_tilde - x||
  double augmented_lagrangian = 0.0;
  double qos_slack = 0.0;  // |h_s^H w_tilde|^2 - gamma_th
  double lipschitz = 0.0;
};

struct OuterRecord {
  double eta = 0.0;
  int inner_iterations = 0;
  double final_residual = 0.0;
  double modulus_deviation = 0.0;  // max_n | |w_tilde_n| - sqrt(p) |
  bool inner_converged = false;
};

struct SolverTrace {
  std::vector<OuterRecord> outer;
  std::vector<InnerRecord> inner;
};

struct AdmmState {
  Eigen::VectorXcd w_tilde;
  Eigen::VectorXcd x;
  Eigen::VectorXcd v;
  double eta = 0.0;
  double lipschitz = 1.0;
};

/// Phase-aligned constant-modulus start. Throws InfeasibleError if even this
/// vector, which maximizes the LU SNR on the modulus set, misses gamma_th.
Beamformer init_w(const ProblemInstance& instance);

/// Projection of w_tilde + v / rho onto the constant-modulus set; zero entries
/// keep the previous x.
Eigen::VectorXcd update_x(const AdmmState& state, const SolverParams& params,
                          double power_w);

/// Closest point to c with |h^H w|^2 >= gamma_th (single-constraint QCQP).
/// An inactive constraint returns c; otherwise only the component along h is
/// stretched to the boundary, keeping its phase (phase 0 if that component is
/// zero).
Eigen::VectorXcd project_qos(const Eigen::VectorXcd& c, const Eigen::VectorXcd& h,
                             double gamma_th);

/// Linearized proximal step at x followed by project_qos, with
/// c = x - (grad Gamma(x) + v) / (rho + L).
Eigen::VectorXcd update_w(const AdmmState& state, const ProblemInstance& instance,
                          const SolverParams& params);

Eigen::VectorXcd update_v(const AdmmState& state, const SolverParams& params);

/// Conservative Lipschitz constant of grad Gamma over the ball ||w||^2 = pN.
double lipschitz_bound(const ProblemInstance& instance, double eta);

struct AdmmResult {
  AdmmState state;
  Eigen::VectorXcd iterate;  // what the outer loop continues from
  int iterations = 0;
  double residual = 0.0;
  double modulus_deviation = 0.0;
  bool converged = false;
};

AdmmResult admm_solve(const ProblemInstance& instance, double eta,
                      const SolverParams& params, const AdmmState& warm_start,
                      SolverTrace* trace = nullptr, int outer_index = 0);

struct SolveResult {
  Beamformer beamformer;
  SolverTrace trace;
  int outer_iterations = 0;
  int inner_iterations_total = 0;
  bool outer_converged = false;
  bool inner_converged = false;  // every ADMM run met delta
  int selected_iterate = 0;      // 0 = initial point
  double qos_slack = 0.0;        // LU SNR - gamma_th of the returned w

  bool converged() const { return outer_converged && inner_converged; }
};

/// Throws InfeasibleError when the QoS threshold is unattainable. The returned
/// beamformer is exactly constant-modulus and is the best QoS-feasible
/// outer iterate by smoothed ratio.
SolveResult dinkelbach_solve(const ProblemInstance& instance, const SolverParams& params);

}  // namespace satsec
