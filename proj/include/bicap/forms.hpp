#pragma once

// Quadratic and bilinear forms on annulus grids in log-polar coordinates
// (t, omega), t = log(1/|x|). Fields passed as `v` are already scaled,
// v = e^t u; fields passed as `u` are plain.

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bicap/sphgrid.hpp"

namespace bicap {

/// Samples of a weight G and its first four derivatives on the t nodes.
/// `point_mass` is the coefficient of delta(t - tau) carried by
/// G'''' + 2G''' - G'' - 2G' in addition to the sampled part.
struct WeightProfile {
  double tau = 0.0;
  std::vector<std::array<double, 5>> samples;
  double point_mass = 0.0;

  /// G(t) = g(t - tau); the combination above is exactly delta(t - tau).
  static WeightProfile kernel(const AnnulusGrid& grid, double tau);
  /// Arbitrary smooth G given with its derivatives.
  static WeightProfile from_function(const AnnulusGrid& grid,
                                     const std::function<std::array<double, 5>(double)>& g);
};

struct FormValue {
  double value = 0.0;
  std::vector<std::pair<std::string, double>> breakdown;

  double group(const std::string& name) const;
};

struct RadialRange {
  double r_inner = 0.0;
  double r_outer = 0.0;
};

/// v = e^t u.
AnnulusField log_field(const AnnulusField& u);

/// h^3 sum (L u)^2, over the whole grid or only the nodes of `region`.
double delta_energy(const VoxelField& u, const std::vector<std::uint8_t>* region = nullptr);
/// Integral of (Delta u)^2 r^2 dr d omega over the annulus.
double delta_energy(const AnnulusField& u, AngularScheme scheme = AngularScheme::Spectral);

/// Psi[u] with its five groups: d2r, dr, dr_grad, lb_sq, v_lb.
FormValue psi_form(const AnnulusField& u, AngularScheme scheme = AngularScheme::Spectral);

/// Six-group bilinear form; groups lb, dt_grad, dt2, grad, dt, zero_order.
FormValue b_form(const AnnulusField& v, const AnnulusField& w, const WeightProfile& weights,
                 AngularScheme scheme = AngularScheme::Spectral);
/// The first five groups of b_form.
FormValue b_tilde_form(const AnnulusField& v, const AnnulusField& w, const WeightProfile& weights,
                       AngularScheme scheme = AngularScheme::Spectral);
/// Five groups with G = g(t - tau), restricted to the t range of `region`.
FormValue q_form(const AnnulusField& u, const RadialRange& region, double tau,
                 AngularScheme scheme = AngularScheme::Spectral);

struct IdentityCheck {
  double lhs = 0.0;  // integral of Delta u Delta(u |x|^{-1} G(log |x|^{-1}))
  FormValue rhs;     // b_form(v, v)
};

/// Both sides of the weighted integration-by-parts identity. Throws
/// std::invalid_argument unless u vanishes on the two outermost t slices
/// at each end.
IdentityCheck main_identity_check(const AnnulusField& u, const WeightProfile& weights,
                                  AngularScheme scheme = AngularScheme::Spectral);

/// Integral over the sphere of v(tau, .) w(tau, .), linear in t between nodes.
double sphere_product(const AnnulusField& v, const AnnulusField& w, double tau);
double sphere_trace(const AnnulusField& v, double tau);

}  // namespace bicap
