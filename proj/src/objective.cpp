#include "satsec/objective.hpp"

#include <algorithm>
#include <cmath>

#include "satsec/errors.hpp"

namespace satsec {
namespace {

// |C^H w|^2 per column, i.e. w^H H_q w for every grid point q of one region.
Eigen::VectorXd grid_snrs(const EveRegionGrid& grid, const Eigen::VectorXcd& w) {
  return (grid.channels.adjoint() * w).cwiseAbs2();
}

Eigen::VectorXd all_grid_snrs(const ProblemInstance& instance, const Eigen::VectorXcd& w) {
  Eigen::VectorXd all(static_cast<Eigen::Index>(instance.total_points()));
  Eigen::Index offset = 0;
  for (const auto& grid : instance.eve_grids) {
    const Eigen::VectorXd q = grid_snrs(grid, w);
    all.segment(offset, q.size()) = q;
    offset += q.size();
  }
  return all;
}

double lse_vector(const Eigen::VectorXd& v, double beta) {
  return lse(std::span<const double>(v.data(), static_cast<std::size_t>(v.size())), beta);
}

// Softmax weights exp(beta v_i) / sum exp(beta v_j), max-shifted.
Eigen::VectorXd softmax(const Eigen::VectorXd& v, double beta) {
  const double top = v.maxCoeff();
  Eigen::VectorXd e = (beta * (v.array() - top)).exp().matrix();
  return e / e.sum();
}

// Smoothed eavesdropping numerator: lse over (1 + q) for UE, 1 + sum of
// per-region lse for CE.
double smoothed_numerator(const Eigen::VectorXcd& w, const ProblemInstance& instance) {
  if (instance.mode == EveMode::kUncoordinated) {
    Eigen::VectorXd v = all_grid_snrs(instance, w);
    v.array() += 1.0;
    return lse_vector(v, instance.beta);
  }
  double sum = 1.0;
  for (const auto& grid : instance.eve_grids) sum += lse_vector(grid_snrs(grid, w), instance.beta);
  return sum;
}

void check_dimension(const Eigen::VectorXcd& w, const ProblemInstance& instance) {
  if (w.size() != instance.h_tilde_s.size()) {
    throw DomainError("beamformer length does not match antenna count");
  }
}

}  // namespace

double Beamformer::max_modulus_error() const {
  const double target = std::sqrt(power_w);
  return (w.cwiseAbs().array() - target).abs().maxCoeff();
}

Eigen::VectorXcd project_constant_modulus(const Eigen::VectorXcd& u, double power_w,
                                          const Eigen::VectorXcd* fallback) {
  const double amp = std::sqrt(power_w);
  Eigen::VectorXcd x(u.size());
  for (Eigen::Index n = 0; n < u.size(); ++n) {
    const double mag = std::abs(u(n));
    if (mag > 0.0) {
      x(n) = amp * u(n) / mag;
    } else {
      x(n) = fallback != nullptr ? (*fallback)(n) : std::complex<double>(amp, 0.0);
    }
  }
  return x;
}

void ProblemInstance::validate() const {
  if (h_tilde_s.size() == 0) throw DomainError("LU channel is empty");
  if (!(beta > 0.0)) throw DomainError("beta must be > 0");
  if (!(gamma_th >= 0.0)) throw DomainError("gamma_th must be >= 0");
  if (!(power_w > 0.0)) throw DomainError("power must be > 0");
  if (eve_grids.empty()) throw DomainError("at least one eavesdropper region required");
  for (const auto& grid : eve_grids) {
    if (grid.channels.rows() != h_tilde_s.size() || grid.channels.cols() == 0) {
      throw DomainError("eve grid channels do not match antenna count");
    }
  }
}

std::size_t ProblemInstance::total_points() const {
  std::size_t total = 0;
  for (const auto& grid : eve_grids) total += static_cast<std::size_t>(grid.channels.cols());
  return total;
}

double snr(const Eigen::VectorXcd& w, const Eigen::VectorXcd& h_tilde) {
  if (w.size() != h_tilde.size()) throw DomainError("snr: dimension mismatch");
  return std::norm(h_tilde.dot(w));  // Eigen's dot conjugates the left operand
}

double lse(std::span<const double> values, double beta) {
  if (values.empty()) throw DomainError("lse of an empty list");
  if (!(beta > 0.0)) throw DomainError("lse needs beta > 0");
  const double top = *std::max_element(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += std::exp(beta * (v - top));
  return top + std::log(sum) / beta;
}

double worst_eve_snr(const Eigen::VectorXcd& w, const ProblemInstance& instance) {
  check_dimension(w, instance);
  if (instance.mode == EveMode::kUncoordinated) {
    double worst = 0.0;
    for (const auto& grid : instance.eve_grids) worst = std::max(worst, grid_snrs(grid, w).maxCoeff());
    return worst;
  }
  double sum = 0.0;
  for (const auto& grid : instance.eve_grids) sum += grid_snrs(grid, w).maxCoeff();
  return sum;
}

double asr(const Eigen::VectorXcd& w, const ProblemInstance& instance) {
  const double lu = snr(w, instance.h_tilde_s);
  const double eve = worst_eve_snr(w, instance);
  return std::max(0.0, std::log2(1.0 + lu) - std::log2(1.0 + eve));
}

double worst_case_ratio(const Eigen::VectorXcd& w, const ProblemInstance& instance) {
  return (1.0 + worst_eve_snr(w, instance)) / (1.0 + snr(w, instance.h_tilde_s));
}

double gamma_objective(const Eigen::VectorXcd& w, const ProblemInstance& instance,
                       double eta) {
  check_dimension(w, instance);
  return smoothed_numerator(w, instance) - eta * (1.0 + snr(w, instance.h_tilde_s));
}

Eigen::VectorXcd gamma_gradient(const Eigen::VectorXcd& w, const ProblemInstance& instance,
                                double eta) {
  check_dimension(w, instance);
  const std::complex<double> lu_inner = instance.h_tilde_s.dot(w);
  Eigen::VectorXcd grad = (-2.0 * eta * lu_inner) * instance.h_tilde_s;

  if (instance.mode == EveMode::kUncoordinated) {
    // One softmax across every (k, i, j); the constant 1 cancels in it.
    const Eigen::VectorXd weights = softmax(all_grid_snrs(instance, w), instance.beta);
    Eigen::Index offset = 0;
    for (const auto& grid : instance.eve_grids) {
      const Eigen::VectorXcd inner = grid.channels.adjoint() * w;
      const Eigen::VectorXd s = weights.segment(offset, inner.size());
      grad += 2.0 * grid.channels * (inner.array() * s.array().cast<std::complex<double>>()).matrix();
      offset += inner.size();
    }
    return grad;
  }
  for (const auto& grid : instance.eve_grids) {
    const Eigen::VectorXcd inner = grid.channels.adjoint() * w;
    const Eigen::VectorXd s = softmax(inner.cwiseAbs2(), instance.beta);
    grad += 2.0 * grid.channels * (inner.array() * s.array().cast<std::complex<double>>()).matrix();
  }
  return grad;
}

double dinkelbach_ratio(const Eigen::VectorXcd& w, const ProblemInstance& instance) {
  check_dimension(w, instance);
  return smoothed_numerator(w, instance) / (1.0 + snr(w, instance.h_tilde_s));
}

}  // namespace satsec
