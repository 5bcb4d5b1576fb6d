#include "satsec/solver.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "satsec/errors.hpp"

namespace satsec {
namespace {

// Slack allowed on the QoS check of a re-projected outer iterate.
constexpr double kQosRelativeTolerance = 1e-7;

double augmented_lagrangian(const AdmmState& s, const ProblemInstance& instance,
                            double rho) {
  const Eigen::VectorXcd diff = s.w_tilde - s.x;
  return gamma_objective(s.w_tilde, instance, s.eta) + s.v.dot(diff).real() +
         0.5 * rho * diff.squaredNorm();
}

// Curvature of the quadratic forms alone, without the softmax coupling term.
double initial_lipschitz(const ProblemInstance& instance, double eta) {
  double eve = 0.0;
  for (const auto& grid : instance.eve_grids) {
    const double top = grid.channels.colwise().squaredNorm().maxCoeff();
    eve = instance.mode == EveMode::kUncoordinated ? std::max(eve, top) : eve + top;
  }
  return std::max(2.0 * eve + 2.0 * std::abs(eta) * instance.h_tilde_s.squaredNorm(),
                  1e-12);
}

bool qos_feasible(const Eigen::VectorXcd& w, const ProblemInstance& instance) {
  return snr(w, instance.h_tilde_s) >= instance.gamma_th * (1.0 - kQosRelativeTolerance);
}

}  // namespace

void SolverParams::validate() const {
  if (!(rho > 0.0)) throw DomainError("rho must be > 0");
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be > 0");
  if (!(delta > 0.0)) throw DomainError("delta must be > 0");
  if (max_outer < 1 || max_inner < 1) throw DomainError("iteration caps must be >= 1");
}

Beamformer init_w(const ProblemInstance& instance) {
  instance.validate();
  Beamformer bf;
  bf.power_w = instance.power_w;
  bf.w = project_constant_modulus(instance.h_tilde_s, instance.power_w);
  if (snr(bf.w, instance.h_tilde_s) < instance.gamma_th) {
    throw InfeasibleError("QoS unattainable at power p");
  }
  return bf;
}

Eigen::VectorXcd update_x(const AdmmState& state, const SolverParams& params,
                          double power_w) {
  const Eigen::VectorXcd u = state.w_tilde + state.v / params.rho;
  return project_constant_modulus(u, power_w, &state.x);
}

Eigen::VectorXcd project_qos(const Eigen::VectorXcd& c, const Eigen::VectorXcd& h,
                             double gamma_th) {
  const std::complex<double> a = h.dot(c);
  if (std::norm(a) >= gamma_th) return c;
  const double h_norm2 = h.squaredNorm();
  if (h_norm2 == 0.0) throw InfeasibleError("QoS constraint with a zero LU channel");
  const std::complex<double> phase = std::abs(a) > 0.0 ? a / std::abs(a) : 1.0;
  const Eigen::VectorXcd perp = c - (a / h_norm2) * h;
  return perp + (std::sqrt(gamma_th) * phase / h_norm2) * h;
}

Eigen::VectorXcd update_w(const AdmmState& state, const ProblemInstance& instance,
                          const SolverParams& params) {
  const Eigen::VectorXcd grad = gamma_gradient(state.x, instance, state.eta);
  const Eigen::VectorXcd c = state.x - (grad + state.v) / (params.rho + state.lipschitz);
  return project_qos(c, instance.h_tilde_s, instance.gamma_th);
}

Eigen::VectorXcd update_v(const AdmmState& state, const SolverParams& params) {
  return state.v + params.rho * (state.w_tilde - state.x);
}

double lipschitz_bound(const ProblemInstance& instance, double eta) {
  double sum_norm2 = 0.0;
  double max_norm2 = 0.0;
  for (const auto& grid : instance.eve_grids) {
    const Eigen::RowVectorXd norms = grid.channels.colwise().squaredNorm();
    sum_norm2 += norms.sum();
    max_norm2 = std::max(max_norm2, norms.maxCoeff());
  }
  const double ball = instance.power_w * static_cast<double>(instance.num_antennas());
  return 2.0 * sum_norm2 + 4.0 * instance.beta * sum_norm2 * max_norm2 * ball +
         2.0 * std::abs(eta) * instance.h_tilde_s.squaredNorm();
}

AdmmResult admm_solve(const ProblemInstance& instance, double eta,
                      const SolverParams& params, const AdmmState& warm_start,
                      SolverTrace* trace, int outer_index) {
  const double analytic = lipschitz_bound(instance, eta);
  AdmmState s = warm_start;
  s.eta = eta;
  s.lipschitz = params.lipschitz_mode == LipschitzMode::kAnalytic
                    ? analytic
                    : std::min(initial_lipschitz(instance, eta), analytic);

  AdmmResult result;
  for (int l = 1; l <= params.max_inner; ++l) {
    s.x = update_x(s, params, instance.power_w);

    Eigen::VectorXcd w_next = update_w(s, instance, params);
    if (params.lipschitz_mode == LipschitzMode::kSafeguarded) {
      const double base = gamma_objective(s.x, instance, eta);
      const Eigen::VectorXcd grad = gamma_gradient(s.x, instance, eta);
      for (;;) {
        const Eigen::VectorXcd step = w_next - s.x;
        const double model = base + grad.dot(step).real() +
                             0.5 * s.lipschitz * step.squaredNorm();
        const double actual = gamma_objective(w_next, instance, eta);
        if (actual <= model + 1e-12 * (1.0 + std::abs(base)) || s.lipschitz >= analytic) break;
        s.lipschitz = std::min(2.0 * s.lipschitz, analytic);
        w_next = update_w(s, instance, params);
      }
    }
    s.w_tilde = std::move(w_next);
    s.v = update_v(s, params);

    result.iterations = l;
    result.residual = (s.w_tilde - s.x).norm();
    if (trace != nullptr) {
      trace->inner.push_back({outer_index, l, result.residual,
                              augmented_lagrangian(s, instance, params.rho),
                              snr(s.w_tilde, instance.h_tilde_s) - instance.gamma_th,
                              s.lipschitz});
    }
    if (result.residual <= params.delta) {
      result.converged = true;
      break;
    }
  }

  const double amp = std::sqrt(instance.power_w);
  result.modulus_deviation = (s.w_tilde.cwiseAbs().array() - amp).abs().maxCoeff();
  result.iterate = result.modulus_deviation <= params.delta
                       ? s.w_tilde
                       : project_constant_modulus(s.w_tilde, instance.power_w, &s.x);
  result.state = std::move(s);
  return result;
}

SolveResult dinkelbach_solve(const ProblemInstance& instance, const SolverParams& params) {
  params.validate();
  const Beamformer start = init_w(instance);

  SolveResult out;
  out.beamformer = start;
  out.inner_converged = true;
  double best_ratio = dinkelbach_ratio(start.w, instance);

  Eigen::VectorXcd w = start.w;
  double eta_prev = 0.0;
  for (int t = 0; t < params.max_outer; ++t) {
    const double eta = dinkelbach_ratio(w, instance);

    AdmmState warm;
    warm.x = project_constant_modulus(w, instance.power_w);
    warm.w_tilde = qos_feasible(warm.x, instance) ? warm.x : w;
    warm.v = Eigen::VectorXcd::Zero(w.size());

    const AdmmResult inner = admm_solve(instance, eta, params, warm, &out.trace, t);
    out.trace.outer.push_back(
        {eta, inner.iterations, inner.residual, inner.modulus_deviation, inner.converged});
    out.inner_iterations_total += inner.iterations;
    out.inner_converged = out.inner_converged && inner.converged;
    out.outer_iterations = t + 1;
    w = inner.iterate;

    const Eigen::VectorXcd candidate = project_constant_modulus(w, instance.power_w, &inner.state.x);
    if (qos_feasible(candidate, instance)) {
      const double ratio = dinkelbach_ratio(candidate, instance);
      if (ratio < best_ratio) {
        best_ratio = ratio;
        out.beamformer.w = candidate;
        out.selected_iterate = t + 1;
      }
    }

    if (std::abs(eta - eta_prev) <= params.epsilon) {
      out.outer_converged = true;
      break;
    }
    eta_prev = eta;
  }
  out.qos_slack = snr(out.beamformer.w, instance.h_tilde_s) - instance.gamma_th;
  return out;
}

}  // namespace satsec
