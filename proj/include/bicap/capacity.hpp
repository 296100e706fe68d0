#pragma once

// Biharmonic capacity Cap_P(K, Omega) by constrained minimization of the
// discrete integral of (Delta u)^2, the 4x4 Gram form b -> Cap_P, and the
// harmonic capacity.

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <variant>
#include <vector>

#include "bicap/pispace.hpp"
#include "bicap/solver.hpp"
#include "bicap/sphgrid.hpp"

namespace bicap {

/// Nodes with r_inner < |x| < r_outer.
struct AnnulusDomain {
  double r_inner = 0.5;
  double r_outer = 4.0;
};

/// Nodes strictly inside the cube of half-width `half_width` centred at
/// `center`, optionally without the origin node (the punctured space).
struct BoxDomain {
  double half_width = 1.0;
  Vec3 center{0.0, 0.0, 0.0};
  bool puncture_origin = true;
};

/// Nodes strictly inside an axis-aligned box [lo, hi].
struct SlabDomain {
  Vec3 lo{-1.0, -1.0, -1.0};
  Vec3 hi{1.0, 1.0, 1.0};
  bool puncture_origin = true;
};

using CapacityDomain = std::variant<AnnulusDomain, BoxDomain, SlabDomain>;

enum class Neighbourhood {
  Dilated,  ///< rasterized K plus one face-neighbour layer
  Core,     ///< nodes within h/2 of K only
};

struct CapacityProblem {
  CompactumSpec compactum;
  CapacityDomain domain;
  int resolution = 48;  // cells across the widest extent of the domain
  CgOptions cg;
  Neighbourhood neighbourhood = Neighbourhood::Dilated;

  /// K inside C_{s, as} on the default domain C_{s/2, 2as}.
  static CapacityProblem around(const CompactumSpec& k, int resolution);
};

/// Grid and masks shared by all solves of one problem.
struct Discretization {
  VoxelGrid grid;
  std::vector<std::uint8_t> domain;
  std::vector<std::uint8_t> fixed;
};

Discretization discretize(const CapacityProblem& problem);

struct CapacityResult {
  double value = 0.0;
  VoxelField minimizer;
  PiProfile profile;
  CgStats stats;
};

struct GramMatrix {
  Eigen::Matrix4d g = Eigen::Matrix4d::Zero();
  std::array<CgStats, 4> stats{};
};

CapacityResult cap_p(const CapacityProblem& problem, const PiProfile& p);
GramMatrix cap_gram(const CapacityProblem& problem);
GramMatrix cap_gram(const Discretization& d, const CgOptions& cg);

struct CapInf {
  double value = 0.0;
  PiProfile b_min;
};

/// Smallest eigenpair of a symmetric 4x4 matrix. Throws
/// std::invalid_argument if g is not symmetric.
CapInf cap_inf(const Eigen::Matrix4d& g);

struct HarmonicOptions {
  /// Adds the regular part of the domain's Green function at `center`,
  /// turning the domain capacity into an estimate of the capacity in all
  /// of R^3 for sets small compared to the domain.
  bool free_space_closure = false;
  Vec3 center{0.0, 0.0, 0.0};
};

CapacityResult harmonic_cap(const CapacityProblem& problem, const HarmonicOptions& opts = {});

/// Ratio Cap(K, C_{s/2,2as}) / Cap(K, punctured box) where the box has
/// `box_factor` times the annulus's outer radius and the same spacing.
double cap_domain_equivalence_check(const CompactumSpec& k, int resolution,
                                    double box_factor = 2.0, const CgOptions& cg = {});

/// Capacities of finite point sets constrained by point values only:
/// S_ij is the energy Gram of minimizers with u(p_k) = delta_ik at the nodes
/// nearest to the points, and G = E^T S E with E_ie the basis profiles at
/// the exact points.
struct PointGram {
  Eigen::MatrixXd s;
  Eigen::Matrix<double, Eigen::Dynamic, 4> e;
  Eigen::Matrix4d g = Eigen::Matrix4d::Zero();
  int iterations = 0;
};

PointGram point_cap_gram(const std::vector<Vec3>& points, const CapacityDomain& domain,
                         int resolution, const CgOptions& cg = {});

/// Builds the grid for a domain at a resolution.
VoxelGrid domain_grid(const CapacityDomain& domain, int resolution);
std::vector<std::uint8_t> domain_mask(const CapacityDomain& domain, const VoxelGrid& grid);

}  // namespace bicap
