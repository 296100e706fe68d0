#pragma once

// Axially symmetric clamped biharmonic problems in log-polar coordinates
// (t, theta), t = log(1/|x|). With u = e^{-t/2} w the energy becomes
// the unweighted integral of (w_tt - 2 w_t + 3w/4 + delta w)^2 dt d omega,
// which stays well conditioned across many decades of radius.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace bicap {

struct AxisymGrid {
  double t_min = 0.0;
  double t_max = 1.0;
  int n_t = 3;      // nodes including both ends
  int n_theta = 8;  // cell-centred colatitudes

  double dt() const { return (t_max - t_min) / (n_t - 1); }
  double dtheta() const;
  double t(int i) const { return t_min + i * dt(); }
  double theta(int k) const { return (k + 0.5) * dtheta(); }
  std::size_t size() const { return static_cast<std::size_t>(n_t) * n_theta; }
  std::size_t index(int i, int k) const { return static_cast<std::size_t>(i) * n_theta + k; }
};

/// u = 0 on the obstacle nodes; u and u_t vanish at t_min (|x| = e^-t_min).
/// Inside |x| = e^-t_max the field continues as |x| P(omega), the local form
/// of a solution that is only required to vanish at the origin.
struct AxisymProblem {
  AxisymGrid grid;
  std::vector<std::uint8_t> obstacle;
  std::function<double(double t, double theta)> load;  // f in Delta^2 u = f
};

struct AxisymSolution {
  AxisymGrid grid;
  std::vector<double> u;
};

/// Direct sparse solve of the normal equations. Throws std::runtime_error
/// if the factorization fails.
AxisymSolution solve_axisym(const AxisymProblem& problem);

/// |grad u| + |u|/|x| = e^t (sqrt(u_t^2 + u_theta^2) + |u|) at the nodes
/// 1..n_t-2 (0 at the two ends).
std::vector<double> gradient_ratio(const AxisymSolution& s);

}  // namespace bicap
