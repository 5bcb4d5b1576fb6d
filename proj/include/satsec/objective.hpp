#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "satsec/uncertainty.hpp"

namespace satsec {

/// UE: eavesdroppers act alone, the strongest one limits secrecy.
/// CE: eavesdroppers combine, their SNRs add.
enum class EveMode { kUncoordinated, kCoordinated };

/// Per-antenna constant-modulus beamformer, |w_n| = sqrt(power_w).
struct Beamformer {
  Eigen::VectorXcd w;
  double power_w = 1.0;

  double max_modulus_error() const;
};

/// Entrywise sqrt(p) * u_n / |u_n|; zero entries take `fallback` (or sqrt(p)
/// when no fallback is given).
Eigen::VectorXcd project_constant_modulus(const Eigen::VectorXcd& u, double power_w,
                                          const Eigen::VectorXcd* fallback = nullptr);

struct ProblemInstance {
  Eigen::VectorXcd h_tilde_s;
  std::vector<EveRegionGrid> eve_grids;
  double gamma_th = 5.0;
  double power_w = 1.0;
  double beta = 100.0;
  EveMode mode = EveMode::kUncoordinated;

  void validate() const;
  std::size_t num_antennas() const { return static_cast<std::size_t>(h_tilde_s.size()); }
  /// K * M1 * M2 summed over regions.
  std::size_t total_points() const;
};

/// |h_tilde^H w|^2.
double snr(const Eigen::VectorXcd& w, const Eigen::VectorXcd& h_tilde);

/// Max-shifted beta^-1 ln sum exp(beta v_i).
double lse(std::span<const double> values, double beta);

/// Worst-case eavesdropper SNR on the grids: the single strongest grid point
/// (UE) or the sum of each eavesdropper's strongest point (CE).
double worst_eve_snr(const Eigen::VectorXcd& w, const ProblemInstance& instance);

/// Worst-case achievable secrecy rate in bits/s/Hz, clamped at zero.
double asr(const Eigen::VectorXcd& w, const ProblemInstance& instance);

/// Unsmoothed fractional objective (1 + worst eve SNR) / (1 + LU SNR); the
/// quantity the robust design minimizes before smoothing.
double worst_case_ratio(const Eigen::VectorXcd& w, const ProblemInstance& instance);

/// Smoothed Dinkelbach subproblem value Gamma(w) at parameter eta.
double gamma_objective(const Eigen::VectorXcd& w, const ProblemInstance& instance,
                       double eta);

/// Gradient of gamma_objective in conjugate coordinates:
/// Gamma(w + d) ~ Gamma(w) + Re{grad^H d}.
Eigen::VectorXcd gamma_gradient(const Eigen::VectorXcd& w, const ProblemInstance& instance,
                                double eta);

/// Smoothed numerator over (1 + LU SNR); the next Dinkelbach parameter.
double dinkelbach_ratio(const Eigen::VectorXcd& w, const ProblemInstance& instance);

}  // namespace satsec
