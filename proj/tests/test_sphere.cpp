#include <doctest.h>

#include <cmath>
#include <vector>

#include "bicap/sphere.hpp"

using namespace bicap;

namespace {

std::vector<double> sample_sphere(const SphereOps& s, double (*f)(const Vec3&)) {
  std::vector<double> v(s.size());
  for (int k = 0; k < s.n_theta(); ++k) {
    for (int j = 0; j < s.n_phi(); ++j) {
      const double th = s.theta(k), ph = 2.0 * kPi * j / s.n_phi();
      v[k * s.n_phi() + j] = f({std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)});
    }
  }
  return v;
}

}  // namespace

TEST_CASE("quadrature is exact on low-degree polynomials") {
  const SphereOps s(8, 16);
  CHECK(s.integrate(sample_sphere(s, [](const Vec3&) { return 1.0; })) == doctest::Approx(4 * kPi).epsilon(1e-14));
  CHECK(s.integrate(sample_sphere(s, [](const Vec3& w) { return w[2] * w[2]; })) ==
        doctest::Approx(4 * kPi / 3).epsilon(1e-14));
  CHECK(s.integrate(sample_sphere(s, [](const Vec3& w) { return w[0] * w[0] * w[1] * w[1]; })) ==
        doctest::Approx(4 * kPi / 15).epsilon(1e-14));
  CHECK(std::abs(s.integrate(sample_sphere(s, [](const Vec3& w) { return w[0] * w[1] * w[2]; }))) < 1e-14);
}

TEST_CASE("fejer weights sum to 2") {
  for (int n : {3, 8, 17}) {
    double s = 0.0;
    for (double w : fejer_weights(n)) s += w;
    CHECK(s == doctest::Approx(2.0).epsilon(1e-14));
  }
}

TEST_CASE("harmonics are eigenfunctions of the spectral Laplace-Beltrami operator") {
  const SphereOps s(12, 24);
  for (int l = 0; l <= 3; ++l) {
    for (int m = -l; m <= l; ++m) {
      std::vector<double> y(s.size()), ly(s.size());
      for (int k = 0; k < s.n_theta(); ++k) {
        for (int j = 0; j < s.n_phi(); ++j) {
          const double th = s.theta(k), ph = 2.0 * kPi * j / s.n_phi();
          y[k * s.n_phi() + j] =
              real_harmonic(l, m, {std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)});
        }
      }
      s.laplace_beltrami(y, ly, AngularScheme::Spectral);
      for (std::size_t i = 0; i < y.size(); ++i) CHECK(ly[i] == doctest::Approx(-l * (l + 1) * y[i]).epsilon(1e-9).scale(1.0));
      std::vector<double> sq(y.size());
      for (std::size_t i = 0; i < y.size(); ++i) sq[i] = y[i] * y[i];
      CHECK(s.integrate(sq) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("five-point scheme converges in the max norm") {
  // The pole rows limit the sup-norm error to first order.
  double prev = 0.0;
  for (int n : {16, 32, 64}) {
    const SphereOps s(n, 2 * n);
    const auto y = sample_sphere(s, [](const Vec3& w) { return w[0] * w[2]; });
    std::vector<double> ly(s.size());
    s.laplace_beltrami(y, ly, AngularScheme::FivePoint);
    double err = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) err = std::max(err, std::abs(ly[i] + 6.0 * y[i]));
    if (prev > 0.0) CHECK(prev / err > 1.8);
    prev = err;
  }
}

TEST_CASE("gradient of omega_3") {
  const SphereOps s(10, 20);
  const auto y = sample_sphere(s, [](const Vec3& w) { return w[2]; });
  std::vector<double> gt(s.size()), gp(s.size());
  s.gradient(y, gt, gp, AngularScheme::Spectral);
  for (int k = 0; k < s.n_theta(); ++k) {
    CHECK(gt[k * s.n_phi()] == doctest::Approx(-std::sin(s.theta(k))).epsilon(1e-12));
    CHECK(std::abs(gp[k * s.n_phi() + 3]) < 1e-12);
  }
}

TEST_CASE("odd meridian count is rejected") { CHECK_THROWS(SphereOps(8, 15)); }
