#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "bicap/kernel.hpp"

using namespace bicap;

// Reference values from tools/oracles.py (symbolic solution of the jump
// conditions, evaluated at 20 digits).
TEST_CASE("kernel matches the symbolic solution") {
  struct Row {
    double t, g, w1, w2;
  };
  const Row rows[] = {
      {-3.0, 0.49170215527202267617, 0.016595689455954647660, 0.53319137891190929532},
      {-1.0, 0.43868675980475961307, 0.12262648039048077387, 0.74525296078096154773},
      {-0.25, 0.37019986948809918692, 0.25960026102380162616, 1.0192005220476032523},
      {0.5, 0.24195208966107634163, 0.12262648039048078263, 0.66784389990787385027},
      {1.0, 0.16138384004628571215, 0.045111761078870897298, 0.39043532171087777024},
      {4.0, 0.0091019090063833381737, 0.00011182087596750394628, 0.018371549326717932267},
  };
  for (const auto& r : rows) {
    CHECK(g(r.t) == doctest::Approx(r.g).epsilon(1e-14));
    CHECK(weight_w1(r.t) == doctest::Approx(r.w1).epsilon(1e-14));
    CHECK(weight_w2(r.t) == doctest::Approx(r.w2).epsilon(1e-14));
  }
}

TEST_CASE("closed forms at the origin") {
  CHECK(g(0.0) == 1.0 / 3.0);
  CHECK(weight_w2(0.0) == 7.0 / 6.0);
  CHECK(weight_w1(0.0) == 1.0 / 3.0);
  CHECK(g_deriv(0.0, 3, Side::Right) - g_deriv(0.0, 3, Side::Left) == doctest::Approx(1.0).epsilon(1e-12));
  // First and second derivatives are continuous.
  CHECK(g_deriv(1e-12, 1) == doctest::Approx(g_deriv(-1e-12, 1)).epsilon(1e-9));
  CHECK(g_deriv(1e-12, 2) == doctest::Approx(g_deriv(-1e-12, 2)).epsilon(1e-9));
}

TEST_CASE("ode residual vanishes off the origin") {
  for (double t = -30.0; t <= 30.0; t += 0.37) {
    if (t == 0.0) continue;
    CHECK(std::abs(ode_residual(t)) < 1e-14);
  }
  CHECK_THROWS_AS(ode_residual(0.0), std::domain_error);
}

TEST_CASE("derivatives agree with finite differences") {
  for (double t : {-2.0, -0.5, 0.7, 3.0}) {
    const double h = 1e-5;
    for (int k = 1; k <= 4; ++k) {
      const auto lo = kernel_sample(t - h), hi = kernel_sample(t + h);
      const double fd = (hi.d[k - 1] - lo.d[k - 1]) / (2 * h);
      CHECK(kernel_sample(t).d[k] == doctest::Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("tail keeps relative precision") {
  // g ~ e^-t / 2 for large t.
  CHECK(g(50.0) / std::exp(-50.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(weight_w2(50.0) / std::exp(-50.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("weights are positive") {
  for (double t = -50.0; t <= 50.0; t += 0.01) {
    CHECK(weight_w1(t) > 0.0);
    CHECK(weight_w2(t) > 0.0);
  }
}

TEST_CASE("invalid derivative order") { CHECK_THROWS_AS(g_deriv(1.0, 5), std::domain_error); }
