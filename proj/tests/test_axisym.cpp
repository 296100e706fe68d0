#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "bicap/axisym.hpp"
#include "bicap/geometry.hpp"

using namespace bicap;

namespace {

AxisymProblem problem(std::function<double(double, double)> load) {
  AxisymProblem p;
  p.grid = {-0.5, 3.0, 36, 12};
  p.obstacle.assign(p.grid.size(), 0);
  for (int k = 0; k < p.grid.n_theta; ++k) p.obstacle[p.grid.index(20, k)] = p.grid.theta(k) > 0.6;
  p.load = std::move(load);
  return p;
}

double bump(double t, double) { return t < 0.2 ? std::pow(std::sin(kPi * (t + 0.5) / 0.7), 2) : 0.0; }

}  // namespace

TEST_CASE("zero load gives zero") {
  const AxisymSolution s = solve_axisym(problem([](double, double) { return 0.0; }));
  for (double v : s.u) CHECK(v == 0.0);
}

TEST_CASE("solutions are linear in the load and vanish on the obstacle") {
  const auto p1 = problem(bump);
  const auto p2 = problem([](double t, double th) { return bump(t, th) * std::cos(th); });
  const auto p3 = problem([](double t, double th) { return bump(t, th) * (2.0 - 3.0 * std::cos(th)); });
  const AxisymSolution s1 = solve_axisym(p1), s2 = solve_axisym(p2), s3 = solve_axisym(p3);
  double scale = 0.0;
  for (double v : s1.u) scale = std::max(scale, std::abs(v));
  REQUIRE(scale > 0.0);
  for (std::size_t i = 0; i < s1.u.size(); ++i) {
    CHECK(std::abs(s3.u[i] - (2.0 * s1.u[i] - 3.0 * s2.u[i])) < 1e-10 * scale);
    if (p1.obstacle[i]) CHECK(s1.u[i] == 0.0);
  }
  for (int k = 0; k < p1.grid.n_theta; ++k) CHECK(s1.u[p1.grid.index(0, k)] == 0.0);
}

TEST_CASE("gradient ratio of |x| is close to 2") {
  AxisymSolution s;
  s.grid = {0.0, 2.0, 21, 6};
  s.u.resize(s.grid.size());
  for (int i = 0; i < s.grid.n_t; ++i)
    for (int k = 0; k < s.grid.n_theta; ++k) s.u[s.grid.index(i, k)] = std::exp(-s.grid.t(i));
  const auto r = gradient_ratio(s);
  const double dt = s.grid.dt();
  CHECK(r.front() == 0.0);
  CHECK(r.back() == 0.0);
  for (int i = 1; i < s.grid.n_t - 1; ++i) {
    for (int k = 0; k < s.grid.n_theta; ++k) {
      CHECK(r[s.grid.index(i, k)] == doctest::Approx(std::sinh(dt) / dt + 1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("grid checks") {
  AxisymProblem p = problem(bump);
  p.obstacle.pop_back();
  CHECK_THROWS_AS(solve_axisym(p), std::invalid_argument);
}
