#include "bicap/axisym.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <cmath>
#include <stdexcept>

#include "bicap/geometry.hpp"

namespace bicap {

double AxisymGrid::dtheta() const { return kPi / n_theta; }

AxisymSolution solve_axisym(const AxisymProblem& pb) {
  const AxisymGrid& g = pb.grid;
  if (g.n_t < 5 || g.n_theta < 2) throw std::invalid_argument("solve_axisym: grid too small");
  if (!pb.obstacle.empty() && pb.obstacle.size() != g.size()) {
    throw std::invalid_argument("solve_axisym: obstacle mask does not match the grid");
  }
  const int nt = g.n_t, nth = g.n_theta;
  const double dt = g.dt(), dth = g.dtheta();

  // Free unknowns: 2 <= i <= n_t - 1 off the obstacle.
  std::vector<int> col(g.size(), -1);
  int n_free = 0;
  for (int i = 2; i <= nt - 1; ++i) {
    for (int k = 0; k < nth; ++k) {
      const std::size_t id = g.index(i, k);
      if (pb.obstacle.empty() || !pb.obstacle[id]) col[id] = n_free++;
    }
  }

  std::vector<double> sin_c(nth), sin_lo(nth), sin_hi(nth), wk(nth);
  for (int k = 0; k < nth; ++k) {
    sin_c[k] = std::sin(g.theta(k));
    sin_lo[k] = k == 0 ? 0.0 : std::sin(k * dth);
    sin_hi[k] = k == nth - 1 ? 0.0 : std::sin((k + 1) * dth);
    wk[k] = 2.0 * kPi * sin_c[k] * dth;
  }

  // Rows: sqrt(dt w_k) (w_tt - 2 w_t + 3/4 w + delta w) at 1 <= i <= n_t - 1.
  // Beyond the last node u = e^{-(t - t_N)} u_N, i.e. w = e^{-(t - t_N)/2} w_N,
  // which supplies the ghost value and adds the tail energy
  // integral of (2 w_N + delta w_N)^2 d omega.
  std::vector<Eigen::Triplet<double>> trip;
  int row = 0;
  const double ghost = std::exp(-0.5 * dt);
  auto lateral = [&](int i, int k, double s, double diag) {
    const double lat = 1.0 / (sin_c[k] * dth * dth);
    auto add = [&](int kk, double v) {
      const int c = col[g.index(i, kk)];
      if (c >= 0 && v != 0.0) trip.emplace_back(row, c, s * v);
    };
    add(k, diag - (sin_lo[k] + sin_hi[k]) * lat);
    if (k > 0) add(k - 1, sin_lo[k] * lat);
    if (k < nth - 1) add(k + 1, sin_hi[k] * lat);
  };
  for (int i = 1; i <= nt - 1; ++i) {
    for (int k = 0; k < nth; ++k, ++row) {
      const double s = std::sqrt(dt * wk[k]);
      auto add = [&](int ii, double v) {
        const int c = col[g.index(ii, k)];
        if (c >= 0 && v != 0.0) trip.emplace_back(row, c, s * v);
      };
      const double up = 1.0 / (dt * dt) - 1.0 / dt;
      add(i - 1, 1.0 / (dt * dt) + 1.0 / dt);
      double diag = -2.0 / (dt * dt) + 0.75;
      if (i + 1 < nt) {
        add(i + 1, up);
      } else {
        diag += ghost * up;
      }
      lateral(i, k, s, diag);
    }
  }
  for (int k = 0; k < nth; ++k, ++row) lateral(nt - 1, k, std::sqrt(wk[k]), 2.0);
  Eigen::SparseMatrix<double> a(row, n_free);
  a.setFromTriplets(trip.begin(), trip.end());
  const Eigen::SparseMatrix<double> kmat = Eigen::SparseMatrix<double>(a.transpose()) * a;

  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n_free);
  if (pb.load) {
    for (int i = 2; i <= nt - 1; ++i) {
      const double t = g.t(i);
      for (int k = 0; k < nth; ++k) {
        const int c = col[g.index(i, k)];
        if (c >= 0) rhs(c) = dt * wk[k] * pb.load(t, g.theta(k)) * std::exp(-3.5 * t);
      }
    }
  }

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(kmat);
  if (solver.info() != Eigen::Success) throw std::runtime_error("solve_axisym: factorization failed");
  const Eigen::VectorXd w = solver.solve(rhs);
  if (solver.info() != Eigen::Success) throw std::runtime_error("solve_axisym: solve failed");

  AxisymSolution out{g, std::vector<double>(g.size(), 0.0)};
  for (int i = 0; i < nt; ++i) {
    for (int k = 0; k < nth; ++k) {
      const std::size_t id = g.index(i, k);
      if (col[id] >= 0) out.u[id] = std::exp(-0.5 * g.t(i)) * w(col[id]);
    }
  }
  return out;
}

std::vector<double> gradient_ratio(const AxisymSolution& s) {
  const AxisymGrid& g = s.grid;
  std::vector<double> q(g.size(), 0.0);
  const double dt = g.dt(), dth = g.dtheta();
  for (int i = 1; i <= g.n_t - 2; ++i) {
    for (int k = 0; k < g.n_theta; ++k) {
      const double u = s.u[g.index(i, k)];
      const double ut = (s.u[g.index(i + 1, k)] - s.u[g.index(i - 1, k)]) / (2.0 * dt);
      // Across a pole the neighbour is the mirrored node itself.
      const double up = s.u[g.index(i, k == g.n_theta - 1 ? k : k + 1)];
      const double um = s.u[g.index(i, k == 0 ? k : k - 1)];
      const double uth = (up - um) / (2.0 * dth);
      q[g.index(i, k)] = std::exp(g.t(i)) * (std::sqrt(ut * ut + uth * uth) + std::abs(u));
    }
  }
  return q;
}

}  // namespace bicap
