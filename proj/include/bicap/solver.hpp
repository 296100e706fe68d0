#pragma once

// Masked quadratic minimization on voxel grids: the clamped bilaplacian
// energy h^3 |L u|^2 and the Dirichlet energy h^3 |grad u|^2, minimized over
// free nodes by preconditioned conjugate gradients.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "bicap/sphgrid.hpp"

namespace bicap {

struct CgOptions {
  double tol = 1e-8;  // relative residual
  int max_iter = 0;   // 0 selects 50 * sqrt(free nodes)
};

struct CgStats {
  int iterations = 0;
  double residual = 0.0;  // final relative residual
  bool converged = false;
};

struct ConvergenceError : std::runtime_error {
  ConvergenceError(const std::string& what, CgStats s) : std::runtime_error(what), stats(s) {}
  CgStats stats;
};

/// Inverse powers of the 7-point Laplacian with zero extension beyond the
/// grid, diagonalized by the type-I sine transform.
class BoxPoissonInverse {
 public:
  explicit BoxPoissonInverse(const VoxelGrid& grid);
  ~BoxPoissonInverse();
  BoxPoissonInverse(const BoxPoissonInverse&) = delete;
  BoxPoissonInverse& operator=(const BoxPoissonInverse&) = delete;
  /// out = L^{-power} in; in and out may alias.
  void apply(std::span<const double> in, std::span<double> out, int power) const;

 private:
  VoxelGrid grid_;
  std::vector<double> eig_;  // eigenvalues of L, same layout as the grid
  void* plan_ = nullptr;
};

enum class Energy {
  Biharmonic,  ///< integral of (Delta u)^2
  Harmonic,    ///< integral of |grad u|^2
};

/// u vanishes off `domain`; u equals `values` on `fixed` (a subset of
/// domain); the remaining nodes are free. `load` (optional) adds the linear
/// term -h^3 sum(load * u), so the minimizer solves Delta^2 u = load (or
/// -Delta u = load) on free nodes.
struct MaskedProblem {
  VoxelGrid grid;
  std::vector<std::uint8_t> domain;
  std::vector<std::uint8_t> fixed;
  std::vector<double> values;
  std::vector<double> load;
};

struct MaskedSolution {
  VoxelField u;
  double energy = 0.0;
  CgStats stats;
};

/// Energy of a grid function with zero extension beyond the grid.
double field_energy(const VoxelField& u, Energy kind);
/// h^3 sum (L u)(L w), or the harmonic analogue.
double energy_pairing(const VoxelField& u, const VoxelField& w, Energy kind);

MaskedSolution solve_masked(const MaskedProblem& problem, Energy kind, const CgOptions& opts = {});

/// Grid with `pad` cells beyond the ball of radius `radius` on every side
/// and spacing close to h, with the origin as a node.
VoxelGrid padded_cube(double radius, double h, int pad = 2);

}  // namespace bicap
