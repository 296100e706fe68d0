#pragma once

// Clamped biharmonic Dirichlet problems on voxel domains, sampled Green
// functions and the gradient estimates built from them.

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bicap/solver.hpp"
#include "bicap/wiener.hpp"

namespace bicap {

/// Nodes of `grid` where u is free; everything else is held at zero, which
/// clamps u (two zero layers) along the boundary of the mask.
struct VoxelDomain {
  VoxelGrid grid;
  std::vector<std::uint8_t> mask;
  std::string name;
  /// Distance (or a lower bound for it) from x to the complement of the
  /// continuum domain; 0 outside.
  std::function<double(const Vec3&)> depth;
};

/// Ball of radius 1 without the origin node; n cells across [-1, 1].
VoxelDomain punctured_ball_domain(int n);
/// Cube of half-width `half_width` centred at the origin.
VoxelDomain box_domain(double half_width, int n);
/// Union of four balls with seeded random centres in [-1/4, 1/4]^3 and
/// radii in [0.45, 0.7].
VoxelDomain blob_domain(std::uint64_t seed, int n);

struct DirichletProblem {
  VoxelDomain domain;
  VoxelField rhs;
  CgOptions cg{1e-10, 0};
};

struct DirichletSolution {
  VoxelField u;
  CgStats stats;
  double energy = 0.0;   // integral of (Delta u)^2
  double pairing = 0.0;  // integral of f u
};

/// Delta^2 u = f on the mask with u in the discrete clamped space. Throws
/// std::invalid_argument if f does not vanish off the mask or the mask is
/// not face-connected; ConvergenceError if CG stalls.
DirichletSolution solve_dirichlet(const DirichletProblem& problem);

struct GreenSample {
  std::array<int, 3> source{};
  VoxelField field;
  CgStats stats;
};

/// G(., y) from the discrete delta h^-3 at the node nearest y. Throws
/// std::invalid_argument if that node or one of its face neighbours is off
/// the mask.
GreenSample green_sample(const VoxelDomain& domain, const Vec3& y, const CgOptions& cg = {1e-10, 0});

struct PointPair {
  Vec3 x;
  Vec3 y;
};

struct GradientSups {
  double mixed = 0.0;  // sup |x - y| |grad_x grad_y G|
  double first = 0.0;  // sup |grad_x G|
  std::vector<double> mixed_values;
  std::vector<double> first_values;
  std::vector<Eigen::Matrix3d> hessians;  // grad_x grad_y G per pair
  int solves = 0;
};

/// Central differences in x of G(., y +- h e_k) for every pair, sharing the
/// seven solves per distinct source. Throws std::invalid_argument for fewer
/// than 16 pairs, pairs closer than 4h, or stencils leaving the mask.
GradientSups mixed_gradient_sup(const VoxelDomain& domain, const std::vector<PointPair>& pairs,
                                const CgOptions& cg = {1e-10, 0});

/// Frobenius norm of grad_x grad_y of |x - y| / (8 pi), times |x - y|.
inline double free_space_mixed_scale() { return std::sqrt(2.0) / (8.0 * kPi); }

/// eta(r): 1 on [0, 1/4], 0 beyond 1/2, joined by a C^4 polynomial step.
double cutoff(double r, int derivative = 0);

struct PuncturedBallReport {
  int n = 0;
  double h = 0.0;
  double f_max_inner = 0.0;       // max |f| on B_{1/8}
  double boundary_max = 0.0;      // max |u| on the two outer node layers and the origin
  double solution_error = 0.0;    // max |u_h - eta|x|| / max |eta|x||
  double sup_grad_sampled = 0.0;  // over B_{1/4}, central differences
  double sup_grad_solved = 0.0;
  Vec3 grad_x_axis{};             // solved field at (h, 0, 0)
  Vec3 grad_z_axis{};             // solved field at (0, 0, h)
  double angle_deg = 0.0;
  CgStats stats;
};

/// Solves Delta^2 u = Delta^2(eta |x|) on the punctured ball with the
/// analytic right-hand side and compares against eta |x|.
PuncturedBallReport punctured_ball_demo(int n, const CgOptions& cg = {1e-10, 0});

enum class ObstaclePattern { None, Every, Alternate };
std::string to_string(ObstaclePattern p);

struct DecayOptions {
  double a = 2.0;
  double R = 0.125;
  int l_max = 8;
  double shell_thickness = 0.2;  // in t = log 1/|x|
  double opening = 0.6;          // polar hole half-angle around +x3
  double dt = 0.04;
  int n_theta = 48;
  int capacity_resolution = 48;
  CgOptions cg;
};

struct DecayReport {
  ObstaclePattern pattern = ObstaclePattern::None;
  std::vector<int> l;
  std::vector<double> capacity_sum;  // S(l)
  std::vector<double> log_sup;       // log sup over |x| <= a^-2l R of |grad u| + |u|/|x|
  double slope = 0.0;                // of log_sup against S(l)
  double intercept = 0.0;
  double r2 = 0.0;
  double slope_per_layer = 0.0;      // of log_sup against l
  bool no_decay_baseline = false;    // no obstacle layers at all
};

/// Spherical shells with a polar opening at the middle of the layers
/// [R a^-2j, R a^-2j+2], j = 2..l_max + 2, and f a smooth bump on
/// 1/2 < |x| < 1 (so f vanishes on B_4R). Solved axisymmetrically; S(l) from
/// the voxel capacities of the same shells.
DecayReport decay_experiment(ObstaclePattern pattern, const DecayOptions& opts = {});

struct RieszSample {
  Vec3 x;
  double lhs = 0.0;  // |grad u(x)|
  double rhs = 0.0;  // integral |f(y)|/|x-y| dy + integral |h| dy
};

struct RieszReport {
  std::vector<RieszSample> samples;
  double sup_ratio = 0.0;
};

/// Solves Delta^2 u = div f + h on `domain` (central-difference divergence)
/// and evaluates both sides of the Riesz-potential gradient bound.
RieszReport riesz_estimate_check(const std::function<Vec3(const Vec3&)>& f,
                                 const std::function<double(const Vec3&)>& h,
                                 const VoxelDomain& domain, const std::vector<Vec3>& points,
                                 const CgOptions& cg = {1e-10, 0});

/// Flat binary dump: dims (3 x int64), spacing, origin (3 x float64), all
/// little-endian, then node values x-fastest. Throws std::runtime_error on
/// I/O failure.
void write_field(const std::string& path, const VoxelField& f);
VoxelField read_field(const std::string& path);

}  // namespace bicap
