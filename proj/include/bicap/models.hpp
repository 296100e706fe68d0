#pragma once

// Model geometries with closed-form or semi-closed-form answers: thin cusps
// around an axis, point sets on a cone, and the four-point layers.

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <vector>

#include "bicap/wiener.hpp"

namespace bicap {

enum class CuspFamily {
  Power,       ///< h(s) = k s^lambda
  InverseLog,  ///< h(s) = (log 1/s)^-p, needs c < 1
  Custom,
};

struct CuspProfile {
  std::function<double(double)> h;
  double c = 1.0;  // outer radius of the profile's domain (0, c)
  CuspFamily family = CuspFamily::Custom;
  double coefficient = 1.0;  // k for the power family
  double exponent = 0.0;     // lambda or p

  static CuspProfile power(double k, double lambda, double c = 1.0);
  static CuspProfile inverse_log(double p, double c = 0.5);
  static CuspProfile custom(std::function<double(double)> h, double c);

  double operator()(double s) const { return h(s); }
  /// Throws std::invalid_argument unless h is nondecreasing with values in
  /// (0, pi] on log-spaced samples of (0, c).
  void validate() const;
};

/// Frozen constants of the two-sided layer bound, calibrated on the
/// constant-aperture family with cusp_layer_capacity at resolution 64.
inline constexpr double kCuspLowerConstant = 4.0;
inline constexpr double kCuspUpperConstant = 30.0;

struct LayerBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// C1 h(s)^2 / s and C2 h(s)^2 / s. Throws std::invalid_argument when s or
/// a s leaves (0, c) or the profile is invalid.
LayerBounds cusp_layer_bounds(const CuspProfile& h, double s, double a);

/// cap_inf of the rasterized layer {s <= |x| <= a s, theta <= h(|x|)} on
/// the box |x1|, |x2| < a s, s/2 < x3 < 3 a s / 2, solved at unit scale.
CapInf cusp_layer_capacity(const CuspProfile& h, double s, double a, int resolution = 64,
                           const CgOptions& cg = {});

/// Integral test for the cusp: closed-form verdicts for tagged families,
/// otherwise a numeric trend. Partial sums are the quadrature of
/// s^-1 h(s)^2 over [c 2^-k, c] for k = 1..40.
RegularityVerdict cusp_criterion(const CuspProfile& h);
std::vector<double> cusp_integral_partials(const CuspProfile& h, int levels = 40);

/// Capacities of a point set for profile p at increasing resolutions on
/// the default annulus domain around the set.
std::vector<double> point_set_capacity_sequence(const std::vector<Vec3>& points,
                                                const PiProfile& p,
                                                const std::vector<int>& resolutions,
                                                const CgOptions& cg = {});

/// Same sequence for the profile b itself, which vanishes on the cone
/// b0|x| + b.x = 0. Throws std::invalid_argument for points off the cone.
std::vector<double> cone_null_capacity(const std::array<double, 4>& b,
                                       const std::vector<Vec3>& points,
                                       const std::vector<int>& resolutions,
                                       const CgOptions& cg = {});

/// Columns are (1, omega) at the four points of one layer. Throws
/// std::invalid_argument unless 0 < alpha < pi/2 and |beta - alpha| < alpha/2.
Eigen::Matrix4d four_point_matrix(double alpha, double beta);

/// A_1..A_3 at radius a^-k, colatitude alpha and longitudes 0, pi/2, pi;
/// A_4 at radius a^(1/2 - k), longitude 3 pi/2, colatitude beta.
std::array<Vec3, 4> four_point_layer(double alpha, double beta, int k, double a);

/// max |alpha - beta| / |cos alpha - cos beta| over the admissible betas,
/// by dense sampling.
double four_point_c0(double alpha);

struct FourPointBound {
  double lambda_min = 0.0;
  double bound = 0.0;
  bool holds = false;
};

/// lambda_min(M M^T) >= sin^2(alpha) C0^-2 |alpha - beta|^2 / 100.
FourPointBound four_point_lower_bound_check(double alpha, double beta);

struct InstabilityOptions {
  double a = 4.0;
  int resolution = 64;  // cells across the unit-scale domain
  CgOptions cg;
};

struct InstabilityReport {
  NecessitySum on_cone;                   // beta_k = alpha, doubled layers
  LayerSeries perturbed;                  // beta_k = alpha + epsilon
  std::vector<double> perturbed_sums;     // sufficiency sums of `perturbed`
  std::vector<double> lower_bound_sums;   // partial sums of (beta_k - alpha)^2
  RegularityVerdict on_cone_verdict;
  RegularityVerdict perturbed_verdict;
  std::vector<double> rebinned_caps;      // per-layer Cap at ratio a^(1/5), unit scale
};

/// Four points per layer k = 1..k_max, with capacities from point values.
InstabilityReport instability_demo(double alpha, double epsilon, int k_max,
                                   const InstabilityOptions& opts = {});

}  // namespace bicap
