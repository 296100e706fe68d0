#include "bicap/kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace bicap {

namespace {

// Right-branch coefficients of e^{-2t} and e^{-t} in -6 g^{(k)}.
constexpr double kRightA[5] = {1.0, -2.0, 4.0, -8.0, 16.0};
constexpr double kRightB[5] = {-3.0, 3.0, -3.0, 3.0, -3.0};

double branch(double t, int order, bool right) {
  if (!right) {
    if (order == 0) return (2.0 - std::expm1(t)) / 6.0;
    return -std::exp(t) / 6.0;
  }
  const double e1 = std::exp(-t);
  if (order == 0) return e1 * (3.0 - e1) / 6.0;
  return -(kRightA[order] * e1 * e1 + kRightB[order] * e1) / 6.0;
}

}  // namespace

double g(double t) { return branch(t, 0, t >= 0.0); }

double g_deriv(double t, int order, Side side) {
  if (order < 1 || order > 4) throw std::domain_error("g_deriv: order must lie in 1..4");
  if (t == 0.0) return branch(t, order, order <= 2 || side == Side::Right);
  return branch(t, order, t > 0.0);
}

double ode_residual(double t) {
  if (t == 0.0) throw std::domain_error("ode_residual: t = 0 is the distributional point");
  const bool right = t > 0.0;
  return branch(t, 4, right) + 2.0 * branch(t, 3, right) - branch(t, 2, right) -
         2.0 * branch(t, 1, right);
}

double weight_w1(double t) {
  return t < 0.0 ? std::exp(t) / 3.0 : std::exp(-2.0 * t) / 3.0;
}

double weight_w2(double t) {
  if (t < 0.0) return (4.0 * std::exp(t) + 3.0) / 6.0;
  const double e1 = std::exp(-t);
  return (e1 * e1 + 6.0 * e1) / 6.0;
}

KernelSample kernel_sample(double t, Side side) {
  KernelSample s;
  s.t = t;
  s.d[0] = g(t);
  for (int k = 1; k <= 4; ++k) s.d[k] = g_deriv(t, k, side);
  return s;
}

}  // namespace bicap
