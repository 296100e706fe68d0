#include "bicap/pispace.hpp"

#include <cmath>
#include <stdexcept>

#include "bicap/sphere.hpp"

namespace bicap {

double PiProfile::norm() const {
  return std::sqrt(b[0] * b[0] + b[1] * b[1] + b[2] * b[2] + b[3] * b[3]);
}

PiProfile PiProfile::normalized() const {
  const double n = norm();
  if (n == 0.0) throw std::domain_error("PiProfile: cannot normalize the zero profile");
  return {{b[0] / n, b[1] / n, b[2] / n, b[3] / n}};
}

PiProfile PiProfile::basis(int e) {
  PiProfile p;
  p.b.at(e) = 1.0;
  return p;
}

double eval(const PiProfile& p, const Vec3& x) {
  const double r = bicap::norm(x);
  if (!(r > 0.0)) throw std::domain_error("eval: profile undefined at the origin");
  return p.b[0] + (p.b[1] * x[0] + p.b[2] * x[1] + p.b[3] * x[2]) / r;
}

double eval_lifted(const PiProfile& p, const Vec3& x) {
  return p.b[0] * bicap::norm(x) + p.b[1] * x[0] + p.b[2] * x[1] + p.b[3] * x[2];
}

PiProfile laplace_beltrami_action(const PiProfile& p) {
  return {{0.0, -2.0 * p.b[1], -2.0 * p.b[2], -2.0 * p.b[3]}};
}

double sphere_l2_sq(const PiProfile& p) {
  return 4.0 * kPi * p.b[0] * p.b[0] +
         4.0 * kPi / 3.0 * (p.b[1] * p.b[1] + p.b[2] * p.b[2] + p.b[3] * p.b[3]);
}

double sphere_l2_sq_quadrature(const PiProfile& p, int n_theta, int n_phi) {
  SphereOps ops(n_theta, n_phi);
  std::vector<double> v(ops.size());
  for (int k = 0; k < n_theta; ++k) {
    for (int j = 0; j < n_phi; ++j) {
      const Vec3 w = from_spherical({1.0, ops.theta(k), 2.0 * kPi * j / n_phi});
      const double q = eval(p, w);
      v[k * n_phi + j] = q * q;
    }
  }
  return ops.integrate(v);
}

PiProfile project_to_pi(const AnnulusField& v) {
  const AnnulusGrid& g = v.grid;
  SphereOps ops(g);
  const std::size_t na = g.angular_size();
  // harmonic (l, m) values on the angular grid, in profile order 1, x1, x2, x3
  const int lm[4][2] = {{0, 0}, {1, 1}, {1, -1}, {1, 0}};
  std::array<std::vector<double>, 4> y;
  for (int e = 0; e < 4; ++e) {
    y[e].resize(na);
    for (int k = 0; k < g.n_theta(); ++k) {
      for (int j = 0; j < g.n_phi(); ++j) {
        y[e][k * g.n_phi() + j] = real_harmonic(lm[e][0], lm[e][1], g.omega(k, j));
      }
    }
  }
  std::array<double, 4> sigma{};
  double wsum = 0.0;
  std::vector<double> prod(na);
  for (int it = 0; it < g.n_t(); ++it) {
    const double w = g.r(it) * g.t_weight(it);
    wsum += w;
    for (int e = 0; e < 4; ++e) {
      for (std::size_t a = 0; a < na; ++a) prod[a] = v[it * na + a] * y[e][a];
      sigma[e] += w * ops.integrate(prod);
    }
  }
  const double c0 = 0.5 / std::sqrt(kPi);
  const double c1 = std::sqrt(3.0 / (4.0 * kPi));
  PiProfile p;
  p.b[0] = sigma[0] / wsum * c0;
  for (int e = 1; e < 4; ++e) p.b[e] = sigma[e] / wsum * c1;
  return p;
}

}  // namespace bicap
