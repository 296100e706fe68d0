#include <doctest.h>

#include <cmath>

#include "bicap/sphgrid.hpp"

using namespace bicap;

TEST_CASE("coordinate maps round trip") {
  for (const Vec3& x : {Vec3{0.3, -0.4, 1.2}, Vec3{-2.0, 0.1, -0.5}, Vec3{0.0, 0.0, 0.7}}) {
    const Vec3 y = from_spherical(to_spherical(x));
    const Vec3 z = from_log_coords(to_log_coords(x));
    for (int a = 0; a < 3; ++a) {
      CHECK(y[a] == doctest::Approx(x[a]).epsilon(1e-14));
      CHECK(z[a] == doctest::Approx(x[a]).epsilon(1e-14));
    }
  }
  const LogPoint p = to_log_coords({0.0, 0.0, std::exp(-2.0)});
  CHECK(p.t == doctest::Approx(2.0));
  CHECK(p.omega[2] == doctest::Approx(1.0));
}

TEST_CASE("centred cube puts the origin on a node") {
  const VoxelGrid g = VoxelGrid::centered_cube(1.0, 16);
  const auto c = g.nearest({0.0, 0.0, 0.0});
  const Vec3 o = g.node(c[0], c[1], c[2]);
  CHECK(norm(o) < 1e-14);
  CHECK(g.h() == doctest::Approx(0.125));
  CHECK(g.ijk(g.index(3, 5, 7)) == std::array<int, 3>{3, 5, 7});
}

TEST_CASE("voxel stencils are exact on polynomials") {
  const VoxelGrid g = VoxelGrid::centered_cube(1.0, 20);
  const VoxelField q = sample(g, [](const Vec3& x) { return dot(x, x); });
  const VoxelField lq = laplacian(q);
  const VoxelField x4 = sample(g, [](const Vec3& x) { return std::pow(x[0], 4); });
  const VoxelField b4 = bilaplacian(x4);
  for (int k = 2; k < 19; ++k) {
    for (int j = 2; j < 19; ++j) {
      for (int i = 2; i < 19; ++i) {
        CHECK(lq[g.index(i, j, k)] == doctest::Approx(6.0).epsilon(1e-10));
        CHECK(b4[g.index(i, j, k)] == doctest::Approx(24.0).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("annulus laplacian converges on harmonic and quadratic fields") {
  double prev = INFINITY;
  for (int n : {16, 32}) {
    const AnnulusGrid g(0.5, 2.0, n, n / 2, n);
    const AnnulusField u = sample(g, [](const Vec3& x) { return dot(x, x) + 1.0 / norm(x) + x[2]; });
    for (auto scheme : {AngularScheme::FivePoint, AngularScheme::Spectral}) {
      const AnnulusField l = laplacian(u, scheme);
      double err = 0.0;
      for (int it = 1; it < g.n_t() - 1; ++it) {
        for (int a = 0; a < g.n_theta(); ++a) {
          for (int b = 0; b < g.n_phi(); ++b) err = std::max(err, std::abs(l[g.index(it, a, b)] - 6.0));
        }
      }
      if (scheme == AngularScheme::Spectral) {
        CHECK(err < prev);
        prev = err;
      }
      CHECK(err < 0.5);
    }
  }
}

TEST_CASE("kelvin transform maps 1 to |y| and is an involution") {
  const AnnulusGrid g(0.5, 2.0, 9, 6, 8);
  const AnnulusField one = sample(g, [](const Vec3&) { return 1.0; });
  const AnnulusField k = kelvin_transform(one);
  CHECK(k.grid.s_inner() == doctest::Approx(0.5));
  CHECK(k.grid.s_outer() == doctest::Approx(2.0));
  for (int it = 0; it < g.n_t(); ++it) {
    CHECK(k[k.grid.index(it, 2, 3)] == doctest::Approx(k.grid.r(it)).epsilon(1e-13));
  }
  const AnnulusField u = sample(g, [](const Vec3& x) { return x[0] + 0.3 * x[2] * x[2]; });
  const AnnulusField back = kelvin_transform(kelvin_transform(u));
  for (std::size_t i = 0; i < u.size(); ++i) CHECK(back[i] == doctest::Approx(u[i]).epsilon(1e-12));
}

TEST_CASE("interpolation is exact for fields linear in t") {
  const AnnulusGrid g(0.5, 2.0, 11, 6, 8);
  const AnnulusField u = sample(g, [](const Vec3& x) { return -std::log(norm(x)); });
  CHECK(interpolate(u, 0.123, 1.0, 2.0) == doctest::Approx(0.123).epsilon(1e-12));
}

TEST_CASE("sphere weights integrate to the area") {
  const AnnulusGrid g(1.0, 2.0, 3, 10, 12);
  double s = 0.0;
  for (int a = 0; a < g.n_theta(); ++a) s += g.sphere_weight(a) * g.n_phi();
  CHECK(s == doctest::Approx(4.0 * kPi).epsilon(1e-13));
}

TEST_CASE("rasterization") {
  const VoxelGrid g = VoxelGrid::centered_cube(2.0, 32);
  const CompactumSpec ball(BallShape{{0.0, 0.0, 1.0}, 0.5});
  const auto core = rasterize_core(ball, g);
  const auto dil = rasterize(ball, g);
  std::size_t nc = 0, nd = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    nc += core[i];
    nd += dil[i];
    if (core[i]) CHECK(dil[i]);
  }
  const double vol = nc * std::pow(g.h(), 3);
  CHECK(vol > 4.0 / 3.0 * kPi * 0.125);
  CHECK(nd > nc);
  CHECK(ball.distance({0.0, 0.0, 2.0}) == doctest::Approx(0.5));
  const CompactumSpec far(BallShape{{10.0, 0.0, 0.0}, 0.1});
  CHECK_THROWS_AS(rasterize(far, g), EmptyCompactumError);
}

TEST_CASE("shell with a polar opening") {
  const CompactumSpec s(ShellShape{1.0, 2.0, 0.5});
  CHECK(s.distance({0.0, 0.0, 1.5}) > 0.0);
  CHECK(s.distance({1.5, 0.0, 0.0}) == 0.0);
  const auto [lo, hi] = s.bounding_radii();
  CHECK(lo == doctest::Approx(1.0));
  CHECK(hi == doctest::Approx(2.0));
}
