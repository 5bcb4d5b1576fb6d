#include "satsec/uncertainty.hpp"

#include "satsec/errors.hpp"

namespace satsec {

void EveRegion::validate() const {
  if (!(x_lower_km <= x_upper_km) || !(y_lower_km <= y_upper_km)) {
    throw DomainError("eve region bounds must satisfy lower <= upper");
  }
  GroundPosition{x_lower_km, y_lower_km}.validate();
  GroundPosition{x_upper_km, y_upper_km}.validate();
}

GroundPosition EveRegion::center() const {
  return {0.5 * (x_lower_km + x_upper_km), 0.5 * (y_lower_km + y_upper_km)};
}

EveRegion EveRegion::centered(GroundPosition center, double edge_km) {
  if (!(edge_km >= 0.0)) throw DomainError("region edge must be >= 0");
  const double half = 0.5 * edge_km;
  return {center.x_km - half, center.x_km + half, center.y_km - half, center.y_km + half};
}

std::vector<GroundPosition> discretize(const EveRegion& region, std::size_t m1,
                                       std::size_t m2, GridEdge edge) {
  if (m1 == 0 || m2 == 0) throw DomainError("grid counts must be >= 1");
  region.validate();
  const double dx = (region.x_upper_km - region.x_lower_km) / static_cast<double>(m1);
  const double dy = (region.y_upper_km - region.y_lower_km) / static_cast<double>(m2);
  const std::size_t nx = edge == GridEdge::kInclusive ? m1 + 1 : m1;
  const std::size_t ny = edge == GridEdge::kInclusive ? m2 + 1 : m2;

  std::vector<GroundPosition> points;
  points.reserve(nx * ny);
  for (std::size_t i = 0; i < nx; ++i) {
    const double x = region.x_lower_km + static_cast<double>(i) * dx;
    for (std::size_t j = 0; j < ny; ++j) {
      points.push_back({x, region.y_lower_km + static_cast<double>(j) * dy});
    }
  }
  return points;
}

std::vector<EveRegionGrid> grid_channels(const SatelliteGeometry& sat,
                                         const LinkBudgetParams& params,
                                         const std::vector<EveRegion>& regions,
                                         const GridOptions& options,
                                         std::mt19937_64* rng) {
  if (regions.empty()) throw DomainError("at least one eve region required");
  if (options.rain == RainPolicy::kSampled && rng == nullptr) {
    throw DomainError("sampled rain policy needs a random generator");
  }
  const std::size_t n = sat.num_antennas();

  std::vector<EveRegionGrid> grids;
  grids.reserve(regions.size());
  for (const EveRegion& region : regions) {
    const Eigen::VectorXd rain = options.rain == RainPolicy::kSampled
                                     ? sample_rain(params, *rng, n)
                                     : nominal_rain(params, n);
    EveRegionGrid grid;
    grid.region = region;
    grid.points = discretize(region, options.m1, options.m2, options.edge);
    grid.m1 = options.edge == GridEdge::kInclusive ? options.m1 + 1 : options.m1;
    grid.m2 = options.edge == GridEdge::kInclusive ? options.m2 + 1 : options.m2;
    grid.channels.resize(static_cast<Eigen::Index>(n),
                         static_cast<Eigen::Index>(grid.points.size()));
    for (std::size_t q = 0; q < grid.points.size(); ++q) {
      grid.channels.col(static_cast<Eigen::Index>(q)) =
          compose_channel(sat, grid.points[q], params, rain, options.mispointing_rad).h_tilde;
    }
    grid.center_channel =
        compose_channel(sat, region.center(), params, rain, options.mispointing_rad).h_tilde;
    grids.push_back(std::move(grid));
  }
  return grids;
}

}  // namespace satsec
