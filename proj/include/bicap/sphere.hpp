#pragma once

// Angular calculus on one (theta, phi) slice of an AnnulusGrid: derivatives,
// the Laplace-Beltrami operator, the surface gradient and quadrature.

#include <span>
#include <vector>

#include "bicap/sphgrid.hpp"

namespace bicap {

class SphereOps {
 public:
  /// n_phi must be even (the spectral scheme pairs antipodal meridians).
  SphereOps(int n_theta, int n_phi);
  explicit SphereOps(const AnnulusGrid& grid) : SphereOps(grid.n_theta(), grid.n_phi()) {}

  int n_theta() const { return n_theta_; }
  int n_phi() const { return n_phi_; }
  std::size_t size() const { return static_cast<std::size_t>(n_theta_) * n_phi_; }
  double theta(int k) const { return (k + 0.5) * kPi / n_theta_; }

  void d_theta(std::span<const double> v, std::span<double> out, AngularScheme scheme) const;
  void d_theta2(std::span<const double> v, std::span<double> out, AngularScheme scheme) const;
  void d_phi(std::span<const double> v, std::span<double> out, AngularScheme scheme) const;
  void d_phi2(std::span<const double> v, std::span<double> out, AngularScheme scheme) const;

  /// delta_omega v.
  void laplace_beltrami(std::span<const double> v, std::span<double> out,
                        AngularScheme scheme) const;
  /// Orthonormal components (e_theta, e_phi) of grad_omega v.
  void gradient(std::span<const double> v, std::span<double> g_theta, std::span<double> g_phi,
                AngularScheme scheme) const;

  /// Quadrature of v over S^2 (Fejer in cos theta, trapezoid in phi);
  /// exact for polynomials in omega of degree < n_theta and < n_phi / 2.
  double integrate(std::span<const double> v) const;
  double weight(int k) const { return weights_[k]; }

 private:
  void spectral_theta(std::span<const double> v, std::span<double> out, int order) const;
  void spectral_phi(std::span<const double> v, std::span<double> out, int order) const;

  int n_theta_;
  int n_phi_;
  std::vector<double> weights_;
};

/// Fejer's first-rule weights on the nodes theta_k = (k + 1/2) pi / n for
/// integrals over [-1, 1] in x = cos(theta).
std::vector<double> fejer_weights(int n);

/// Real orthonormal spherical harmonic of degree l <= 3 (m in [-l, l]);
/// used for projections and test fields.
double real_harmonic(int l, int m, const Vec3& omega);

}  // namespace bicap
