#include "bicap/solver.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numeric>

#include "fftw_planner.hpp"

namespace bicap {

namespace {

double dot_span(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

BoxPoissonInverse::BoxPoissonInverse(const VoxelGrid& grid) : grid_(grid) {
  const auto [nx, ny, nz] = grid.dims();
  const double h2 = grid.h() * grid.h();
  auto axis = [&](int n) {
    std::vector<double> e(n);
    for (int k = 0; k < n; ++k) {
      const double s = std::sin(kPi * (k + 1) / (2.0 * (n + 1)));
      e[k] = -4.0 * s * s / h2;
    }
    return e;
  };
  const auto ex = axis(nx), ey = axis(ny), ez = axis(nz);
  eig_.resize(grid.size());
  for (int k = 0; k < nz; ++k) {
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) eig_[grid.index(i, j, k)] = ex[i] + ey[j] + ez[k];
    }
  }
  std::vector<double> scratch(grid.size());
  std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
  plan_ = fftw_plan_r2r_3d(nz, ny, nx, scratch.data(), scratch.data(), FFTW_RODFT00, FFTW_RODFT00,
                           FFTW_RODFT00, FFTW_ESTIMATE | FFTW_UNALIGNED);
}

BoxPoissonInverse::~BoxPoissonInverse() {
  std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_));
}

void BoxPoissonInverse::apply(std::span<const double> in, std::span<double> out, int power) const {
  auto plan = static_cast<fftw_plan>(plan_);
  const auto [nx, ny, nz] = grid_.dims();
  const double norm = 8.0 * (nx + 1.0) * (ny + 1.0) * (nz + 1.0);
  std::vector<double> buf(in.begin(), in.end());
  fftw_execute_r2r(plan, buf.data(), buf.data());
  for (std::size_t i = 0; i < buf.size(); ++i) {
    const double e = eig_[i];
    double inv = 1.0 / e;
    if (power == 2) inv *= inv;
    buf[i] *= inv / norm;
  }
  fftw_execute_r2r(plan, buf.data(), out.data());
}

double energy_pairing(const VoxelField& u, const VoxelField& w, Energy kind) {
  const double h3 = std::pow(u.grid.h(), 3);
  if (kind == Energy::Biharmonic) {
    const VoxelField lu = laplacian(u);
    const VoxelField lw = (&u == &w) ? lu : laplacian(w);
    return h3 * dot_span(lu.values, lw.values);
  }
  const VoxelField lw = laplacian(w);
  return -h3 * dot_span(u.values, lw.values);
}

double field_energy(const VoxelField& u, Energy kind) { return energy_pairing(u, u, kind); }

VoxelGrid padded_cube(double radius, double h, int pad) {
  const int half = static_cast<int>(std::ceil(radius / h)) + pad;
  return VoxelGrid::centered_cube(half * h, 2 * half);
}

MaskedSolution solve_masked(const MaskedProblem& pb, Energy kind, const CgOptions& opts) {
  const VoxelGrid& g = pb.grid;
  const std::size_t n = g.size();
  if (pb.domain.size() != n || pb.fixed.size() != n) {
    throw std::invalid_argument("solve_masked: mask sizes do not match the grid");
  }
  std::vector<std::uint8_t> free(n, 0);
  std::size_t n_free = 0;
  for (std::size_t i = 0; i < n; ++i) {
    free[i] = pb.domain[i] && !pb.fixed[i];
    n_free += free[i];
  }
  const double sign = (kind == Energy::Biharmonic) ? 1.0 : -1.0;

  // Operator on free nodes: sign * P L^p P (p = 2 or 1); the common factor
  // h^3 is dropped from both sides.
  auto apply_op = [&](const std::vector<double>& x, std::vector<double>& y) {
    VoxelField f(g, x);
    VoxelField lf = laplacian(f);
    if (kind == Energy::Biharmonic) lf = laplacian(lf);
    for (std::size_t i = 0; i < n; ++i) y[i] = free[i] ? sign * lf[i] : 0.0;
  };

  VoxelField fixed_part(g);
  if (!pb.values.empty()) {
    for (std::size_t i = 0; i < n; ++i) {
      if (pb.fixed[i] && pb.domain[i]) fixed_part[i] = pb.values[i];
    }
  }
  std::vector<double> b(n, 0.0);
  {
    apply_op(fixed_part.values, b);
    for (std::size_t i = 0; i < n; ++i) b[i] = -b[i];
    if (!pb.load.empty()) {
      for (std::size_t i = 0; i < n; ++i) {
        if (free[i]) b[i] += pb.load[i];
      }
    }
  }

  BoxPoissonInverse precond(g);
  const int power = (kind == Energy::Biharmonic) ? 2 : 1;
  auto apply_prec = [&](const std::vector<double>& r, std::vector<double>& z) {
    precond.apply(r, z, power);
    for (std::size_t i = 0; i < n; ++i) z[i] = free[i] ? sign * z[i] : 0.0;
  };

  CgStats stats;
  const int cap = opts.max_iter > 0
                      ? opts.max_iter
                      : static_cast<int>(50.0 * std::sqrt(static_cast<double>(n_free))) + 10;
  std::vector<double> x(n, 0.0), r(b), z(n), p(n), ap(n);
  const double bnorm = std::sqrt(dot_span(b, b));
  if (bnorm == 0.0 || n_free == 0) {
    stats.converged = true;
  } else {
    apply_prec(r, z);
    p = z;
    double rz = dot_span(r, z);
    for (int it = 1; it <= cap; ++it) {
      apply_op(p, ap);
      const double alpha = rz / dot_span(p, ap);
      for (std::size_t i = 0; i < n; ++i) {
        x[i] += alpha * p[i];
        r[i] -= alpha * ap[i];
      }
      stats.iterations = it;
      stats.residual = std::sqrt(dot_span(r, r)) / bnorm;
      if (stats.residual <= opts.tol) {
        stats.converged = true;
        break;
      }
      apply_prec(r, z);
      const double rz_new = dot_span(r, z);
      const double beta = rz_new / rz;
      rz = rz_new;
      for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    if (!stats.converged) {
      throw ConvergenceError("conjugate gradients did not reach the tolerance", stats);
    }
  }

  MaskedSolution out;
  out.u = fixed_part;
  for (std::size_t i = 0; i < n; ++i) {
    if (free[i]) out.u[i] += x[i];
  }
  out.energy = field_energy(out.u, kind);
  out.stats = stats;
  return out;
}

}  // namespace bicap
