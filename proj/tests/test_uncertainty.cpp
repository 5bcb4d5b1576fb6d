#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "satsec/errors.hpp"
#include "satsec/uncertainty.hpp"

using namespace satsec;

TEST_CASE("discretize a 100 km span into four steps") {
  const EveRegion r{0.0, 100.0, 0.0, 100.0};
  const auto pts = discretize(r, 4, 1);
  REQUIRE(pts.size() == 4);
  CHECK(pts[0].x_km == 0.0);
  CHECK(pts[1].x_km == 25.0);
  CHECK(pts[2].x_km == 50.0);
  CHECK(pts[3].x_km == 75.0);
}

TEST_CASE("degenerate and rectangular grids") {
  const EveRegion r{-30.0, 70.0, 10.0, 60.0};
  const auto one = discretize(r, 1, 1);
  REQUIRE(one.size() == 1);
  CHECK(one[0] == GroundPosition{-30.0, 10.0});
  CHECK(discretize(r, 3, 5).size() == 15);
  CHECK(discretize(r, 3, 5, GridEdge::kInclusive).size() == 24);
}

TEST_CASE("grid points follow x_L + i dx exactly") {
  const EveRegion r{12.3, 98.7, -45.6, 7.8};
  const std::size_t m1 = 7, m2 = 9;
  const auto pts = discretize(r, m1, m2);
  const double dx = (r.x_upper_km - r.x_lower_km) / m1;
  const double dy = (r.y_upper_km - r.y_lower_km) / m2;
  for (std::size_t i = 0; i < m1; ++i) {
    for (std::size_t j = 0; j < m2; ++j) {
      const GroundPosition& p = pts[i * m2 + j];
      CHECK(p.x_km == r.x_lower_km + static_cast<double>(i) * dx);
      CHECK(p.y_km == r.y_lower_km + static_cast<double>(j) * dy);
    }
  }
}

TEST_CASE("inclusive grids reach the upper edge") {
  const EveRegion r{0.0, 100.0, 0.0, 50.0};
  const auto pts = discretize(r, 4, 2, GridEdge::kInclusive);
  CHECK(pts.back() == GroundPosition{100.0, 50.0});
}

TEST_CASE("zero-area region collapses every point") {
  const EveRegion r{5.0, 5.0, 6.0, 6.0};
  for (const auto& p : discretize(r, 3, 3)) CHECK(p == GroundPosition{5.0, 6.0});
}

TEST_CASE("invalid regions are rejected") {
  CHECK_THROWS_AS(discretize(EveRegion{10.0, 0.0, 0.0, 1.0}, 2, 2), DomainError);
  CHECK_THROWS_AS(discretize(EveRegion{0.0, 1.0, 0.0, 1.0}, 0, 2), DomainError);
  CHECK_THROWS_AS(EveRegion::centered({0.0, 0.0}, -1.0), DomainError);
}

TEST_CASE("single-point grid equals the corner channel") {
  const auto sat = SatelliteGeometry::hexagonal(7, 250.0);
  const LinkBudgetParams p;
  const EveRegion r = EveRegion::centered({200.0, 100.0}, 100.0);
  GridOptions opt;
  opt.m1 = opt.m2 = 1;
  const auto grids = grid_channels(sat, p, {r}, opt);
  const ChannelVector corner =
      compose_channel(sat, {r.x_lower_km, r.y_lower_km}, p, nominal_rain(p, 7));
  CHECK(grids[0].channels.col(0) == corner.h_tilde);
}

TEST_CASE("identical regions give identical nominal grids") {
  const auto sat = SatelliteGeometry::hexagonal(7, 250.0);
  const EveRegion r = EveRegion::centered({-150.0, 250.0}, 80.0);
  const auto grids = grid_channels(sat, LinkBudgetParams{}, {r, r}, GridOptions{});
  CHECK(grids[0].channels == grids[1].channels);
  CHECK(grids[0].points == grids[1].points);
}

TEST_CASE("channels line up with points") {
  const auto sat = SatelliteGeometry::hexagonal(7, 250.0);
  const LinkBudgetParams p;
  const EveRegion r = EveRegion::centered({0.0, -250.0}, 100.0);
  GridOptions opt;
  opt.m1 = 4;
  opt.m2 = 3;
  const auto grid = grid_channels(sat, p, {r}, opt).front();
  REQUIRE(grid.size() == 12);
  REQUIRE(grid.channels.cols() == 12);
  for (std::size_t q = 0; q < grid.size(); ++q) {
    const ChannelVector ch = compose_channel(sat, grid.points[q], p, nominal_rain(p, 7));
    CHECK(grid.channels.col(static_cast<Eigen::Index>(q)) == ch.h_tilde);
  }
}

TEST_CASE("sampled rain draws one fade vector per region") {
  const auto sat = SatelliteGeometry::hexagonal(7, 250.0);
  const LinkBudgetParams p;
  const EveRegion r = EveRegion::centered({216.5, 125.0}, 100.0);
  GridOptions opt;
  opt.rain = RainPolicy::kSampled;
  std::mt19937_64 rng(11), replay(11);
  const auto grids = grid_channels(sat, p, {r, r}, opt, &rng);
  const Eigen::VectorXd first = sample_rain(p, replay, 7);
  const ChannelVector ch = compose_channel(sat, grids[0].points[5], p, first);
  CHECK(grids[0].channels.col(5) == ch.h_tilde);
  CHECK(grids[0].channels != grids[1].channels);
  CHECK_THROWS_AS(grid_channels(sat, p, {r}, opt, nullptr), DomainError);
}

TEST_CASE("neighbouring grid channels vary smoothly") {
  const auto sat = SatelliteGeometry::hexagonal(7, 250.0);
  const EveRegion r = EveRegion::centered({-216.5, 125.0}, 100.0);
  const auto grid = grid_channels(sat, LinkBudgetParams{}, {r}, GridOptions{}).front();
  for (std::size_t i = 0; i < grid.m1; ++i) {
    for (std::size_t j = 0; j + 1 < grid.m2; ++j) {
      const double a = grid.channels.col(static_cast<Eigen::Index>(i * grid.m2 + j)).norm();
      const double b = grid.channels.col(static_cast<Eigen::Index>(i * grid.m2 + j + 1)).norm();
      CHECK(std::abs(a - b) <= 0.1 * std::max(a, b));
    }
  }
}

TEST_CASE("the worst case over a subset never exceeds the full grid") {
  const auto sat = SatelliteGeometry::hexagonal(7, 250.0);
  const EveRegion r = EveRegion::centered({0.0, -250.0}, 100.0);
  const auto grid = grid_channels(sat, LinkBudgetParams{}, {r}, GridOptions{}).front();
  std::mt19937_64 rng(5);
  Eigen::VectorXcd w(7);
  std::uniform_real_distribution<double> ph(0.0, 2.0 * kPi);
  for (Eigen::Index n = 0; n < 7; ++n) w(n) = std::polar(1.0, ph(rng));
  const Eigen::VectorXd snrs = (grid.channels.adjoint() * w).cwiseAbs2();
  const double full = snrs.maxCoeff();
  for (Eigen::Index start = 0; start < snrs.size(); start += 7) {
    const Eigen::Index len = std::min<Eigen::Index>(13, snrs.size() - start);
    CHECK(snrs.segment(start, len).maxCoeff() <= full);
  }
}
