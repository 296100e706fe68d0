#include <doctest.h>

#include <cmath>
#include <random>

#include "bicap/capacity.hpp"

using namespace bicap;

TEST_CASE("cap_inf of a diagonal matrix") {
  Eigen::Matrix4d g = Eigen::Vector4d(4, 3, 2, 1).asDiagonal();
  const CapInf c = cap_inf(g);
  CHECK(c.value == doctest::Approx(1.0));
  CHECK(std::abs(c.b_min.b[3]) == doctest::Approx(1.0));
  CHECK(std::abs(c.b_min.b[0]) < 1e-14);
  g(0, 1) = 0.5;
  CHECK_THROWS_AS(cap_inf(g), std::invalid_argument);
}

TEST_CASE("cap_inf agrees with a sampled minimum on the unit sphere") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> n01;
  Eigen::Matrix4d a;
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) a(i, k) = n01(rng);
  const Eigen::Matrix4d g = a * a.transpose() + 0.1 * Eigen::Matrix4d::Identity();
  const CapInf c = cap_inf(g);
  double best = INFINITY;
  for (int s = 0; s < 1000000; ++s) {
    Eigen::Vector4d b(n01(rng), n01(rng), n01(rng), n01(rng));
    b.normalize();
    best = std::min(best, b.dot(g * b));
  }
  CHECK(best >= c.value - 1e-12);
  CHECK(best == doctest::Approx(c.value).epsilon(1e-3));
  const Eigen::Vector4d bm(c.b_min.b[0], c.b_min.b[1], c.b_min.b[2], c.b_min.b[3]);
  CHECK(bm.dot(g * bm) == doctest::Approx(c.value).epsilon(1e-12));
}

TEST_CASE("a compactum off the grid is rejected") {
  CapacityProblem p{CompactumSpec(BallShape{{9.0, 0.0, 0.0}, 0.1}), AnnulusDomain{0.5, 2.5}, 24};
  CHECK_THROWS_AS(cap_p(p, PiProfile::basis(0)), EmptyCompactumError);
}

TEST_CASE("Gram matrix of a symmetric shell") {
  CapacityProblem p{CompactumSpec(ShellShape{1.0, 1.5, 0.0}), AnnulusDomain{0.5, 2.5}, 24};
  const GramMatrix gm = cap_gram(p);
  const Eigen::Matrix4d& g = gm.g;
  CHECK((g - g.transpose()).norm() < 1e-12 * g.norm());
  // Point symmetry decouples b0 from b1..b3; rotation symmetry of the grid
  // makes the three dipole entries equal.
  for (int i = 1; i < 4; ++i) CHECK(std::abs(g(0, i)) < 1e-6 * g(0, 0));
  CHECK(g(1, 1) == doctest::Approx(g(2, 2)).epsilon(1e-6));
  CHECK(g(1, 1) == doctest::Approx(g(3, 3)).epsilon(1e-6));
  for (int i = 0; i < 4; ++i) {
    CHECK(cap_p(p, PiProfile::basis(i)).value == doctest::Approx(g(i, i)).epsilon(1e-6));
  }
  CHECK(cap_inf(g).value > 0.0);
}

TEST_CASE("larger compacta have larger capacity") {
  const AnnulusDomain dom{0.5, 2.5};
  const PiProfile p{{1.0, 0.2, 0.0, -0.3}};
  CgOptions cg{1e-10, 0};
  const double small = cap_p({CompactumSpec(BallShape{{0, 0, 1.2}, 0.2}), dom, 24, cg}, p).value;
  const double big = cap_p({CompactumSpec(BallShape{{0, 0, 1.2}, 0.4}), dom, 24, cg}, p).value;
  CHECK(big >= small);
}

TEST_CASE("harmonic capacity of a ball") {
  const double r = 0.25;
  CapacityProblem p{CompactumSpec(BallShape{{0, 0, 0}, r}), BoxDomain{1.0, {0, 0, 0}, false}, 64, {1e-10, 0},
                    Neighbourhood::Core};
  const CapacityResult c = harmonic_cap(p, {true, {0, 0, 0}});
  CHECK(c.value == doctest::Approx(4 * kPi * r).epsilon(0.08));
}

TEST_CASE("point Gram is the point-value projection") {
  const std::vector<Vec3> pts{{0, 0, 1}, {1, 0, 0}, {0, 1.5, 0}, {-1.2, 0, 0.3}};
  const PointGram pg = point_cap_gram(pts, AnnulusDomain{0.5, 3.0}, 24);
  CHECK(pg.s.rows() == 4);
  const Eigen::Matrix4d g = pg.e.transpose() * pg.s * pg.e;
  CHECK((g - pg.g).norm() < 1e-12 * g.norm());
  CHECK(pg.e(0, 0) == doctest::Approx(1.0));
  CHECK(pg.e(0, 3) == doctest::Approx(1.0));
}
