#include <doctest.h>

#include <cmath>

#include "bicap/pispace.hpp"

using namespace bicap;

TEST_CASE("closed-form sphere norm matches quadrature") {
  const PiProfile p{{0.7, -0.2, 1.1, 0.4}};
  const double b2 = 0.2 * 0.2 + 1.1 * 1.1 + 0.4 * 0.4;
  CHECK(sphere_l2_sq(p) == doctest::Approx(4 * kPi * 0.49 + 4 * kPi / 3 * b2).epsilon(1e-14));
  CHECK(sphere_l2_sq_quadrature(p) == doctest::Approx(sphere_l2_sq(p)).epsilon(1e-13));
}

TEST_CASE("evaluation and lifting") {
  const PiProfile p{{1.0, 0.0, 0.0, 2.0}};
  CHECK(eval(p, {0.0, 0.0, 3.0}) == doctest::Approx(3.0));
  CHECK(eval(p, {0.0, 0.0, -0.5}) == doctest::Approx(-1.0));
  CHECK(eval_lifted(p, {0.0, 0.0, -0.5}) == doctest::Approx(-0.5));
  CHECK(eval_lifted(p, {0.0, 0.0, 0.0}) == 0.0);
  CHECK_THROWS_AS(eval(p, {0.0, 0.0, 0.0}), std::domain_error);
}

TEST_CASE("Laplace-Beltrami action") {
  const PiProfile l = laplace_beltrami_action(PiProfile{{3.0, 1.0, -2.0, 0.5}});
  CHECK(l.b == std::array<double, 4>{0.0, -2.0, 4.0, -1.0});
}

TEST_CASE("normalization and basis") {
  const PiProfile p{{3.0, 0.0, 4.0, 0.0}};
  CHECK(p.norm() == doctest::Approx(5.0));
  CHECK(p.normalized().norm() == doctest::Approx(1.0));
  CHECK(PiProfile::basis(2).b == std::array<double, 4>{0.0, 0.0, 1.0, 0.0});
}

TEST_CASE("projection recovers a profile and drops higher harmonics") {
  const AnnulusGrid g(0.5, 2.0, 9, 16, 32);
  const AnnulusField v = sample(g, [](const Vec3& x) {
    const double r = norm(x);
    return 0.5 - 0.25 * x[0] / r + 2.0 * x[2] / r + x[0] * x[1] / (r * r);
  });
  const PiProfile p = project_to_pi(v);
  CHECK(p.b[0] == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(p.b[1] == doctest::Approx(-0.25).epsilon(1e-10));
  CHECK(std::abs(p.b[2]) < 1e-10);
  CHECK(p.b[3] == doctest::Approx(2.0).epsilon(1e-10));
}
