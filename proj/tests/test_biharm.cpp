#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "bicap/biharm.hpp"

using namespace bicap;

TEST_CASE("cutoff values and smoothness") {
  CHECK(cutoff(0.0) == 1.0);
  CHECK(cutoff(0.25) == 1.0);
  CHECK(cutoff(0.375) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(cutoff(0.5) == 0.0);
  CHECK(cutoff(0.9) == 0.0);
  for (int d = 1; d <= 4; ++d) {
    CHECK(std::abs(cutoff(0.25 + 1e-12, d)) < 1e-4);
    CHECK(std::abs(cutoff(0.5 - 1e-12, d)) < 1e-4);
  }
  const double r = 0.33, e = 1e-6;
  CHECK(cutoff(r, 1) == doctest::Approx((cutoff(r + e) - cutoff(r - e)) / (2 * e)).epsilon(1e-7));
}

TEST_CASE("field files round trip") {
  const VoxelGrid g({-1.0, 0.5, 2.0}, 0.25, {5, 4, 3});
  const VoxelField f = sample(g, [](const Vec3& x) { return x[0] * 3.0 - x[1] * x[2]; });
  const auto path = (std::filesystem::temp_directory_path() / "bicap_field_test.bin").string();
  write_field(path, f);
  const VoxelField back = read_field(path);
  CHECK(back.grid.same_layout(g));
  CHECK(back.values == f.values);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(read_field(path), std::runtime_error);
}

TEST_CASE("Dirichlet solve: energy equals load pairing") {
  const VoxelDomain d = box_domain(1.0, 16);
  VoxelField f(d.grid);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Vec3 x = d.grid.node(i);
    if (d.mask[i]) f[i] = std::exp(-8.0 * dot(x, x));
  }
  const DirichletSolution s = solve_dirichlet({d, f});
  CHECK(s.stats.converged);
  CHECK(s.energy == doctest::Approx(s.pairing).epsilon(1e-8));
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!d.mask[i]) CHECK(s.u[i] == 0.0);
  }
  // Symmetry of the box and the load.
  auto at = [&](const Vec3& x) {
    const auto c = d.grid.nearest(x);
    return s.u[d.grid.index(c[0], c[1], c[2])];
  };
  CHECK(at({-0.375, 0.0, 0.0}) == doctest::Approx(at({0.375, 0.0, 0.0})).epsilon(1e-8));
  CHECK(at({0.0, -0.375, 0.125}) == doctest::Approx(at({0.125, 0.0, -0.375})).epsilon(1e-8));
  CHECK(at({0.0, 0.0, 0.0}) > at({0.5, 0.0, 0.0}));
}

TEST_CASE("Dirichlet solve rejects a load off the mask") {
  const VoxelDomain d = box_domain(1.0, 16);
  VoxelField f(d.grid);
  f[0] = 1.0;
  CHECK_THROWS_AS(solve_dirichlet({d, f}), std::invalid_argument);
}

TEST_CASE("Green samples") {
  const VoxelDomain d = punctured_ball_domain(16);
  CHECK_THROWS_AS(green_sample(d, {0.0, 0.0, 0.99}), std::invalid_argument);
  CHECK_THROWS_AS(green_sample(d, {0.0, 0.0, 5.0}), std::invalid_argument);
  const GreenSample gs = green_sample(d, {0.0, 0.0, 0.5});
  CHECK(gs.stats.converged);
  const auto& g = d.grid;
  const auto s = gs.source;
  CHECK(gs.field[g.index(s[0], s[1], s[2])] > 0.0);
  CHECK(gs.field[g.index(s[0] + 1, s[1], s[2])] == doctest::Approx(gs.field[g.index(s[0], s[1] + 1, s[2])]).epsilon(1e-6));
}

TEST_CASE("mixed gradient argument checks") {
  const VoxelDomain d = box_domain(1.0, 16);
  std::vector<PointPair> few(3, PointPair{{0.0, 0.0, 0.0}, {0.5, 0.0, 0.0}});
  CHECK_THROWS_AS(mixed_gradient_sup(d, few), std::invalid_argument);
  std::vector<PointPair> close(16, PointPair{{0.0, 0.0, 0.0}, {0.1, 0.0, 0.0}});
  CHECK_THROWS_AS(mixed_gradient_sup(d, close), std::invalid_argument);
}

TEST_CASE("domains") {
  const VoxelDomain b = punctured_ball_domain(16);
  const auto o = b.grid.nearest({0.0, 0.0, 0.0});
  CHECK(b.mask[b.grid.index(o[0], o[1], o[2])] == 0);
  CHECK(b.depth({0.0, 0.0, 0.5}) == doctest::Approx(0.5));
  const VoxelDomain x = blob_domain(3, 16);
  const VoxelDomain y = blob_domain(3, 16);
  CHECK(x.mask == y.mask);
  CHECK_THROWS_AS(box_domain(1.0, 4), std::invalid_argument);
  CHECK(to_string(ObstaclePattern::Alternate) == "alternate");
}
