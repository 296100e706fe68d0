#pragma once

// The bounded fundamental solution g of g'''' + 2g''' - g'' - 2g' = delta
// that vanishes at +infinity, with its branchwise derivatives.

#include <array>

namespace bicap {

enum class Side { Left, Right };

double g(double t);

/// Derivative of order 1..4. At t = 0 orders 1 and 2 ignore `side`; the
/// third derivative jumps by 1 there.
double g_deriv(double t, int order, Side side = Side::Right);

/// g'''' + 2g''' - g'' - 2g' evaluated on the branch containing t != 0.
double ode_residual(double t);

/// -(g'' + g'): e^t / 3 for t < 0, e^{-2t} / 3 for t >= 0.
double weight_w1(double t);
/// -(2g'' + 3g' - g): (4e^t + 3) / 6 for t < 0, (e^{-2t} + 6e^{-t}) / 6 for t >= 0.
double weight_w2(double t);

struct KernelSample {
  double t = 0.0;
  std::array<double, 5> d{};  // g, g', g'', g''', g''''
};

KernelSample kernel_sample(double t, Side side = Side::Right);

}  // namespace bicap
