#include <doctest.h>

#include <cmath>

#include "bicap/forms.hpp"
#include "bicap/kernel.hpp"

using namespace bicap;

namespace {

// Smooth field vanishing with two slices of margin at both t ends.
double bump_t(double t, double t0, double t1) {
  const double s = (t - t0) / (t1 - t0);
  if (s <= 0.0 || s >= 1.0) return 0.0;
  return std::pow(s * (1.0 - s), 4);
}

}  // namespace

TEST_CASE("energy of |x| on the annulus C_{1,2} is 16 pi") {
  // Delta |x| = 2/|x|, so the integral of (Delta u)^2 is 4 * 4 pi * (2 - 1).
  const AnnulusGrid g(1.0, 2.0, 65, 8, 16);
  const AnnulusField u = sample(g, [](const Vec3& x) { return norm(x); });
  CHECK(delta_energy(u) == doctest::Approx(50.265482457436692).epsilon(1e-3));
}

TEST_CASE("sphere traces") {
  const AnnulusGrid g(0.5, 2.0, 9, 8, 16);
  const AnnulusField one = sample(g, [](const Vec3&) { return 1.0; });
  CHECK(sphere_trace(one, 0.1) == doctest::Approx(4 * kPi).epsilon(1e-13));
  const AnnulusField e3 = sample(g, [](const Vec3& x) { return x[2] / norm(x); });
  CHECK(sphere_trace(e3, -0.3) == doctest::Approx(4 * kPi / 3).epsilon(1e-13));
  CHECK(std::abs(sphere_product(one, e3, 0.0)) < 1e-13);
}

TEST_CASE("b_form is symmetric and its groups add up") {
  const double tmax = 1.3;
  const AnnulusGrid g(std::exp(-tmax), std::exp(tmax), 33, 12, 24);
  auto field = [&](double c) {
    return sample(g, [&, c](const Vec3& x) {
      const double t = -std::log(norm(x));
      return bump_t(t, -tmax + 0.2, tmax - 0.2) * (1.0 + c * x[2] / norm(x) + 0.3 * x[0] / norm(x));
    });
  };
  const AnnulusField v = log_field(field(0.5));
  const AnnulusField w = log_field(field(-1.0));
  const WeightProfile wp = WeightProfile::kernel(g, 0.3);
  const FormValue a = b_form(v, w, wp);
  const FormValue b = b_form(w, v, wp);
  CHECK(a.value == doctest::Approx(b.value).epsilon(1e-10));
  double sum = 0.0;
  for (const auto& [name, x] : a.breakdown) sum += x;
  CHECK(sum == doctest::Approx(a.value).epsilon(1e-12));
  CHECK(a.breakdown.size() == 6);
  const FormValue bt = b_tilde_form(v, w, wp);
  CHECK(bt.value == doctest::Approx(a.value - a.group("zero_order")).epsilon(1e-10));
  CHECK_THROWS(a.group("missing"));
}

TEST_CASE("main identity holds for a compactly supported field") {
  const double tmax = 1.3;
  const AnnulusGrid g(std::exp(-tmax), std::exp(tmax), 65, 16, 32);
  const AnnulusField u = sample(g, [&](const Vec3& x) {
    const double t = -std::log(norm(x));
    return bump_t(t, -tmax + 0.1, tmax - 0.1) * (1.0 + 0.5 * x[2] / norm(x));
  });
  const IdentityCheck c = main_identity_check(u, WeightProfile::kernel(g, 0.3));
  CHECK(c.rhs.value == doctest::Approx(c.lhs).epsilon(0.02));
}

TEST_CASE("main identity rejects fields that do not vanish at the ends") {
  const AnnulusGrid g(0.5, 2.0, 17, 8, 16);
  const AnnulusField u = sample(g, [](const Vec3&) { return 1.0; });
  CHECK_THROWS_AS(main_identity_check(u, WeightProfile::kernel(g, 0.0)), std::invalid_argument);
}

TEST_CASE("kernel weight profile samples g") {
  const AnnulusGrid g(0.5, 2.0, 17, 4, 8);
  const WeightProfile wp = WeightProfile::kernel(g, 0.2);
  for (int i = 0; i < g.n_t(); ++i) CHECK(wp.samples[i][0] == doctest::Approx(bicap::g(g.t(i) - 0.2)));
}
