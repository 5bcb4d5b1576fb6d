#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "satsec/geometry_channel.hpp"

namespace satsec {

/// Axis-aligned rectangle known to contain one eavesdropper.
struct EveRegion {
  double x_lower_km = 0.0;
  double x_upper_km = 0.0;
  double y_lower_km = 0.0;
  double y_upper_km = 0.0;

  void validate() const;
  GroundPosition center() const;

  static EveRegion centered(GroundPosition center, double edge_km);

  friend bool operator==(const EveRegion&, const EveRegion&) = default;
};

/// Exclusive grids stop one step short of the upper edge; inclusive grids
/// append the upper-edge row and column.
enum class GridEdge { kExclusive, kInclusive };

/// How rain fades are assigned to eavesdropper channels, whose true location
/// (and hence rain) is unknown. Nominal uses the deterministic median fade;
/// sampled draws one fade vector per eavesdropper shared by all its grid points.
enum class RainPolicy { kNominal, kSampled };

/// Grid points x_L + i dx, y_L + j dy with dx = (x_U - x_L)/m1. Point (i, j)
/// lands at index i * (columns) + j.
std::vector<GroundPosition> discretize(const EveRegion& region, std::size_t m1,
                                       std::size_t m2,
                                       GridEdge edge = GridEdge::kExclusive);

struct EveRegionGrid {
  EveRegion region;
  std::size_t m1 = 0;  // points along x actually stored
  std::size_t m2 = 0;  // points along y actually stored
  std::vector<GroundPosition> points;
  /// N x (m1*m2); column q is the noise-normalized channel at points[q].
  Eigen::MatrixXcd channels;
  /// Normalized channel at the region center, same rain as the grid.
  Eigen::VectorXcd center_channel;

  std::size_t size() const { return points.size(); }
};

struct GridOptions {
  std::size_t m1 = 10;
  std::size_t m2 = 10;
  GridEdge edge = GridEdge::kExclusive;
  RainPolicy rain = RainPolicy::kNominal;
  double mispointing_rad = 0.0;
};

/// Composes the normalized channel at every grid point of every region. `rng`
/// is consulted only under RainPolicy::kSampled (one draw per region, in order).
std::vector<EveRegionGrid> grid_channels(const SatelliteGeometry& sat,
                                         const LinkBudgetParams& params,
                                         const std::vector<EveRegion>& regions,
                                         const GridOptions& options,
                                         std::mt19937_64* rng = nullptr);

}  // namespace satsec
