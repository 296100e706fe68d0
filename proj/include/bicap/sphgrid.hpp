#pragma once

// Coordinate maps, structured grids, scalar fields and the discrete
// differential operators every other module is built on.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <utility>
#include <string>
#include <variant>
#include <vector>

#include "bicap/geometry.hpp"

namespace bicap {

struct SphericalPoint {
  double r = 1.0;
  double theta = 0.0;  // colatitude in [0, pi]
  double phi = 0.0;    // longitude in [0, 2 pi)
};

/// (t, omega) with t = log(1/|x|) and omega = x/|x|.
struct LogPoint {
  double t = 0.0;
  Vec3 omega{0.0, 0.0, 1.0};
};

SphericalPoint to_spherical(const Vec3& x);
Vec3 from_spherical(const SphericalPoint& p);

LogPoint to_log_coords(const Vec3& x);
Vec3 from_log_coords(const LogPoint& p);

// ---------------------------------------------------------------------------
// Grids
// ---------------------------------------------------------------------------

/// Uniform axis-aligned node lattice, x-fastest ordering.
class VoxelGrid {
 public:
  VoxelGrid() = default;
  VoxelGrid(Vec3 origin, double h, std::array<int, 3> dims);

  /// Cube [-half_width, half_width]^3 with `cells` cells per axis; with an
  /// even cell count the origin is a node.
  static VoxelGrid centered_cube(double half_width, int cells);

  const Vec3& origin() const { return origin_; }
  double h() const { return h_; }
  const std::array<int, 3>& dims() const { return dims_; }
  std::size_t size() const {
    return static_cast<std::size_t>(dims_[0]) * dims_[1] * dims_[2];
  }
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(k) * dims_[1] + j) * dims_[0] + i;
  }
  std::array<int, 3> ijk(std::size_t idx) const;
  Vec3 node(int i, int j, int k) const {
    return {origin_[0] + i * h_, origin_[1] + j * h_, origin_[2] + k * h_};
  }
  Vec3 node(std::size_t idx) const {
    auto c = ijk(idx);
    return node(c[0], c[1], c[2]);
  }
  /// Nearest node to x, clamped into the grid.
  std::array<int, 3> nearest(const Vec3& x) const;
  bool same_layout(const VoxelGrid& o) const;

 private:
  Vec3 origin_{0.0, 0.0, 0.0};
  double h_ = 1.0;
  std::array<int, 3> dims_{3, 3, 3};
};

/// Tensor grid on the annulus C_{s_inner, s_outer} in (t, theta, phi).
/// t nodes are uniform and include both ends; theta nodes sit at
/// (k + 1/2) pi / n_theta so no node touches a pole; phi is periodic.
class AnnulusGrid {
 public:
  AnnulusGrid() = default;
  AnnulusGrid(double s_inner, double s_outer, int n_t, int n_theta, int n_phi);

  double s_inner() const { return s_inner_; }
  double s_outer() const { return s_outer_; }
  int n_t() const { return n_t_; }
  int n_theta() const { return n_theta_; }
  int n_phi() const { return n_phi_; }
  double t_min() const { return t_min_; }
  double t_max() const { return t_max_; }
  double dt() const { return dt_; }
  double dtheta() const { return kPi / n_theta_; }
  double dphi() const { return 2.0 * kPi / n_phi_; }

  std::size_t size() const {
    return static_cast<std::size_t>(n_t_) * n_theta_ * n_phi_;
  }
  std::size_t angular_size() const {
    return static_cast<std::size_t>(n_theta_) * n_phi_;
  }
  std::size_t index(int it, int ith, int iph) const {
    return (static_cast<std::size_t>(it) * n_theta_ + ith) * n_phi_ + iph;
  }
  double t(int it) const { return t_min_ + it * dt_; }
  double r(int it) const;
  double theta(int ith) const { return (ith + 0.5) * kPi / n_theta_; }
  double phi(int iph) const { return iph * 2.0 * kPi / n_phi_; }
  Vec3 omega(int ith, int iph) const;
  Vec3 node(int it, int ith, int iph) const;

  /// Quadrature weight of angular node (ith, iph) for integrals over S^2.
  /// Fejer's first rule in cos(theta) times the trapezoid rule in phi.
  double sphere_weight(int ith) const { return sphere_weights_[ith]; }
  const std::vector<double>& sphere_weights() const { return sphere_weights_; }
  /// Trapezoid weight of t node it.
  double t_weight(int it) const;

  /// Grid on C_{1/s_outer, 1/s_inner} whose t nodes are the negated ones.
  AnnulusGrid reflected() const;
  bool same_layout(const AnnulusGrid& o) const;

 private:
  double s_inner_ = 0.5, s_outer_ = 1.0;
  int n_t_ = 3, n_theta_ = 4, n_phi_ = 8;
  double t_min_ = 0.0, t_max_ = 0.0, dt_ = 0.0;
  std::vector<double> sphere_weights_;
};

template <class Grid>
struct Field {
  Grid grid;
  std::vector<double> values;

  Field() = default;
  explicit Field(Grid g) : grid(std::move(g)), values(grid.size(), 0.0) {}
  Field(Grid g, std::vector<double> v);

  std::size_t size() const { return values.size(); }
  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
};

using VoxelField = Field<VoxelGrid>;
using AnnulusField = Field<AnnulusGrid>;

VoxelField sample(const VoxelGrid& grid, const std::function<double(const Vec3&)>& f);
AnnulusField sample(const AnnulusGrid& grid, const std::function<double(const Vec3&)>& f);

// ---------------------------------------------------------------------------
// Operators
// ---------------------------------------------------------------------------

/// 7-point Laplacian. Values beyond the grid are taken as zero, so every
/// node carries a value; only interior nodes approximate the continuum
/// operator for fields that do not vanish near the edge.
VoxelField laplacian(const VoxelField& f);
/// laplacian applied twice (25-point stencil in 3D).
VoxelField bilaplacian(const VoxelField& f);

enum class AngularScheme {
  FivePoint,  ///< conservative 5-point Laplace-Beltrami stencil
  Spectral,   ///< Fourier differentiation on the doubled sphere
};

/// d_t or d_t^2 (order 1 or 2), centered inside and second-order one-sided
/// at the two t ends.
AnnulusField t_derivative(const AnnulusField& f, int order);

/// e^{2t}(d_t^2 - d_t + delta_omega) with centered t differences in the
/// interior and second-order one-sided differences at the two t ends.
AnnulusField laplacian(const AnnulusField& f, AngularScheme scheme = AngularScheme::FivePoint);
AnnulusField bilaplacian(const AnnulusField& f, AngularScheme scheme = AngularScheme::FivePoint);

/// U(y) = |y| u(y/|y|^2) on the reflected grid (exact node mapping).
AnnulusField kelvin_transform(const AnnulusField& u);
/// Same transform resampled onto `target` by trilinear interpolation in
/// (t, theta, phi).
AnnulusField kelvin_transform(const AnnulusField& u, const AnnulusGrid& target);

/// Trilinear interpolation of an annulus field at an arbitrary point
/// inside the grid's t range.
double interpolate(const AnnulusField& f, double t, double theta, double phi);

// ---------------------------------------------------------------------------
// Compacta
// ---------------------------------------------------------------------------

struct VoxelMaskShape {
  VoxelGrid grid;
  std::vector<std::uint8_t> mask;
};

/// {s <= |x| <= a s, theta <= h(|x|)} around the +x3 axis.
struct CuspLayerShape {
  std::function<double(double)> profile;
  double s = 1.0;
  double a = 2.0;
};

/// The part of {b0|x| + b.x = 0} with r_inner <= |x| <= r_outer, thickened
/// by `thickness` (full width).
struct ConeSectionShape {
  std::array<double, 4> b{0.0, 0.0, 0.0, 1.0};
  double r_inner = 1.0;
  double r_outer = 2.0;
  double thickness = 0.0;
};

struct PointSetShape {
  std::vector<Vec3> points;
  std::vector<double> radii;  // per point; empty means all zero
};

/// Closed shell r_inner <= |x| <= r_outer minus the polar cap
/// theta < opening around +x3 (opening = 0 keeps the full shell).
struct ShellShape {
  double r_inner = 1.0;
  double r_outer = 2.0;
  double opening = 0.0;
};

struct BallShape {
  Vec3 center{0.0, 0.0, 0.0};
  double radius = 1.0;
};

using CompactumVariant = std::variant<VoxelMaskShape, CuspLayerShape, ConeSectionShape,
                                      PointSetShape, ShellShape, BallShape>;

class CompactumSpec {
 public:
  explicit CompactumSpec(CompactumVariant shape);

  const CompactumVariant& shape() const { return shape_; }
  /// Euclidean distance from x to the set (approximate for cone-like
  /// shapes, exact for balls, shells and points).
  double distance(const Vec3& x) const;
  /// Radii of the smallest origin-centred closed annulus holding the set.
  std::pair<double, double> bounding_radii() const;
  /// Whether the set may contain the origin (centred balls, masks touching it).
  bool contains_origin() const;
  std::string kind() const;

 private:
  CompactumVariant shape_;
};

struct EmptyCompactumError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Nodes within h/2 of K, then dilated by one cell through face
/// neighbours. Throws EmptyCompactumError when nothing lands on the grid.
std::vector<std::uint8_t> rasterize(const CompactumSpec& spec, const VoxelGrid& grid);
/// Raw nodes within h/2 of K, without dilation (may be empty).
std::vector<std::uint8_t> rasterize_core(const CompactumSpec& spec, const VoxelGrid& grid);
/// One face-neighbour dilation.
std::vector<std::uint8_t> dilate(const std::vector<std::uint8_t>& mask, const VoxelGrid& grid);

}  // namespace bicap
