#pragma once

// Profiles P(x) = b0 + b1 x1/|x| + b2 x2/|x| + b3 x3/|x|.

#include <array>

#include "bicap/sphgrid.hpp"

namespace bicap {

struct PiProfile {
  std::array<double, 4> b{0.0, 0.0, 0.0, 0.0};

  double norm() const;
  PiProfile normalized() const;
  static PiProfile basis(int e);
};

/// Throws std::domain_error at x = 0.
double eval(const PiProfile& p, const Vec3& x);
/// |x| P(x) = b0 |x| + b.x, continuous with value 0 at the origin.
double eval_lifted(const PiProfile& p, const Vec3& x);
/// The Laplace-Beltrami image, again a profile: (0, -2 b1, -2 b2, -2 b3).
PiProfile laplace_beltrami_action(const PiProfile& p);

/// Closed form of the integral of P(omega)^2 over the unit sphere.
double sphere_l2_sq(const PiProfile& p);
/// The same integral by sphere quadrature.
double sphere_l2_sq_quadrature(const PiProfile& p, int n_theta = 8, int n_phi = 8);

/// Degree 0 and 1 harmonic coefficients of v on each sphere |x| = r,
/// averaged uniformly in r, assembled back into a profile.
PiProfile project_to_pi(const AnnulusField& v);

}  // namespace bicap
