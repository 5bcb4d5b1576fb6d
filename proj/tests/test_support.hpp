#pragma once

// Small synthetic instances for unit and acceptance tests.

#include <cmath>
#include <complex>
#include <cstddef>
#include <random>

#include <Eigen/Dense>

#include "satsec/objective.hpp"

namespace satsec::testing {

inline Eigen::VectorXcd random_complex(std::size_t n, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale / std::sqrt(2.0));
  Eigen::VectorXcd v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = {g(rng), g(rng)};
  return v;
}

inline Eigen::VectorXcd random_unimodular(std::size_t n, std::mt19937_64& rng, double power_w) {
  std::uniform_real_distribution<double> phase(0.0, 2.0 * 3.14159265358979323846);
  Eigen::VectorXcd v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = std::polar(std::sqrt(power_w), phase(rng));
  return v;
}

// K regions of `points` random channels each; the LU channel is stronger so
// that gamma_th (a fraction of the phase-aligned optimum) is attainable.
inline ProblemInstance random_instance(std::size_t n, std::size_t regions, std::size_t points,
                                       EveMode mode, std::mt19937_64& rng, double beta = 10.0,
                                       double eve_scale = 0.3) {
  ProblemInstance inst;
  inst.h_tilde_s = random_complex(n, rng);
  inst.power_w = 1.0;
  inst.beta = beta;
  inst.mode = mode;
  for (std::size_t k = 0; k < regions; ++k) {
    EveRegionGrid grid;
    grid.m1 = points;
    grid.m2 = 1;
    grid.channels.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(points));
    for (std::size_t q = 0; q < points; ++q) {
      grid.channels.col(static_cast<Eigen::Index>(q)) = random_complex(n, rng, eve_scale);
      grid.points.push_back({static_cast<double>(k), static_cast<double>(q)});
    }
    grid.center_channel = grid.channels.col(0);
    inst.eve_grids.push_back(std::move(grid));
  }
  const double best = std::pow(inst.h_tilde_s.cwiseAbs().sum(), 2.0) * inst.power_w;
  inst.gamma_th = 0.3 * best;
  return inst;
}

// Eavesdropper grid with all-zero channels.
inline EveRegionGrid zero_grid(std::size_t n, std::size_t points) {
  EveRegionGrid grid;
  grid.m1 = points;
  grid.m2 = 1;
  grid.channels = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n),
                                         static_cast<Eigen::Index>(points));
  grid.points.assign(points, GroundPosition{});
  grid.center_channel = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n));
  return grid;
}

// Central difference of Gamma along d against Re{grad^H d}; relative error.
inline double gradient_fd_error(const ProblemInstance& inst, const Eigen::VectorXcd& w,
                                const Eigen::VectorXcd& d, double eta, double t = 1e-6) {
  const double fd = (gamma_objective(w + t * d, inst, eta) - gamma_objective(w - t * d, inst, eta)) /
                    (2.0 * t);
  const double analytic = gamma_gradient(w, inst, eta).dot(d).real();
  return std::abs(fd - analytic) / std::max(std::abs(analytic), 1e-8);
}

// Closest point to c on {|h^H w|^2 >= gamma} found by a zooming grid over the
// (scale, phase) of the component along h; the orthogonal part is kept.
inline Eigen::VectorXcd sweep_qos_projection(const Eigen::VectorXcd& c, const Eigen::VectorXcd& h,
                                             double gamma) {
  const double hn = h.norm();
  const Eigen::VectorXcd u = h / hn;
  const std::complex<double> a = u.dot(c);
  const double s_min = std::sqrt(gamma) / hn;
  double s_lo = s_min, s_hi = s_min + 2.0 * std::abs(a) + 1.0;
  double p_lo = 0.0, p_hi = 2.0 * 3.14159265358979323846;
  double best = INFINITY, best_s = s_min, best_p = 0.0;
  for (int round = 0; round < 40; ++round) {
    const int steps = 64;
    for (int i = 0; i <= steps; ++i) {
      const double s = s_lo + (s_hi - s_lo) * i / steps;
      for (int j = 0; j <= steps; ++j) {
        const double p = p_lo + (p_hi - p_lo) * j / steps;
        const double d = std::abs(std::polar(s, p) - a);
        if (d < best) {
          best = d;
          best_s = s;
          best_p = p;
        }
      }
    }
    const double ds = 4.0 * (s_hi - s_lo) / steps, dp = 4.0 * (p_hi - p_lo) / steps;
    s_lo = std::max(s_min, best_s - ds);
    s_hi = best_s + ds;
    p_lo = best_p - dp;
    p_hi = best_p + dp;
  }
  return c - a * u + std::polar(best_s, best_p) * u;
}

}  // namespace satsec::testing
