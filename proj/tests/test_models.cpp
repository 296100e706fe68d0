#include <doctest.h>

#include <cmath>

#include "bicap/models.hpp"

using namespace bicap;

TEST_CASE("four-point matrix degenerates on the cone") {
  for (double alpha : {0.3, 0.7, kPi / 4, 1.2}) {
    const Eigen::Matrix4d m = four_point_matrix(alpha, alpha);
    const Eigen::Matrix4d mmt = m * m.transpose();
    CHECK(std::abs(mmt.selfadjointView<Eigen::Lower>().eigenvalues().minCoeff()) < 1e-12);
    CHECK(four_point_lower_bound_check(alpha, 1.1 * alpha).holds);
  }
  CHECK_THROWS_AS(four_point_matrix(1.6, 1.6), std::invalid_argument);
  CHECK_THROWS_AS(four_point_matrix(0.4, 0.7), std::invalid_argument);
  CHECK_THROWS_AS(four_point_matrix(0.0, 0.0), std::invalid_argument);
}

TEST_CASE("four-point constant against the symbolic supremum") {
  CHECK(four_point_c0(0.3) == doctest::Approx(4.486371908159344).epsilon(1e-3));
  CHECK(four_point_c0(0.7) == doctest::Approx(2.0053798547342407).epsilon(1e-3));
  CHECK(four_point_c0(kPi / 4) == doctest::Approx(1.8115703163744792).epsilon(1e-3));
  CHECK(four_point_c0(1.2) == doctest::Approx(1.2959582979601745).epsilon(1e-3));
}

TEST_CASE("four-point layer geometry") {
  const auto p = four_point_layer(0.7, 0.8, 2, 4.0);
  CHECK(norm(p[0]) == doctest::Approx(1.0 / 16));
  CHECK(norm(p[3]) == doctest::Approx(std::pow(4.0, -1.5)));
  CHECK(std::acos(p[3][2] / norm(p[3])) == doctest::Approx(0.8));
  CHECK(std::acos(p[1][2] / norm(p[1])) == doctest::Approx(0.7));
}

TEST_CASE("cusp integral partial sums") {
  const auto sq = cusp_integral_partials(CuspProfile::power(1.0, 0.5), 10);
  CHECK(sq.back() == doctest::Approx(0.9990234375).epsilon(1e-8));
  const auto lg = cusp_integral_partials(CuspProfile::inverse_log(0.5, 0.5), 10);
  CHECK(lg.back() == doctest::Approx(2.3978952727983705).epsilon(1e-8));
  const double th = 0.3;
  const auto flat = cusp_integral_partials(CuspProfile::power(th, 0.0), 12);
  for (int k = 1; k <= 12; ++k) CHECK(flat[k - 1] == doctest::Approx(th * th * k * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("cusp verdicts") {
  CHECK(cusp_criterion(CuspProfile::power(1.0, 0.5)).kind == VerdictKind::AnalyticConvergent);
  CHECK(cusp_criterion(CuspProfile::power(0.2, 0.0)).kind == VerdictKind::AnalyticDivergent);
  CHECK(cusp_criterion(CuspProfile::inverse_log(0.5)).kind == VerdictKind::AnalyticDivergent);
  CHECK(cusp_criterion(CuspProfile::inverse_log(1.0)).kind == VerdictKind::AnalyticConvergent);
  const auto custom = cusp_criterion(CuspProfile::custom([](double s) { return std::sqrt(s); }, 1.0));
  CHECK(custom.kind == VerdictKind::NumericTrend);
  CHECK(*custom.model == TrendModel::Bounded);
  const auto custom_flat = cusp_criterion(CuspProfile::custom([](double) { return 0.2; }, 1.0));
  CHECK(*custom_flat.model == TrendModel::Linear);
}

TEST_CASE("cusp profile validation") {
  CHECK_THROWS_AS(CuspProfile::custom([](double s) { return 1.0 - s; }, 0.5).validate(), std::invalid_argument);
  CHECK_THROWS_AS(CuspProfile::custom([](double) { return 4.0; }, 0.5).validate(), std::invalid_argument);
  CHECK_NOTHROW(CuspProfile::power(0.5, 0.5).validate());
  CHECK_THROWS_AS(cusp_layer_bounds(CuspProfile::power(0.5, 0.5), 0.6, 2.0), std::invalid_argument);
  const LayerBounds b = cusp_layer_bounds(CuspProfile::power(0.2, 0.0), 0.25, 2.0);
  CHECK(b.lower == doctest::Approx(kCuspLowerConstant * 0.04 / 0.25));
  CHECK(b.upper == doctest::Approx(kCuspUpperConstant * 0.04 / 0.25));
}

TEST_CASE("cone points are rejected off the cone") {
  const std::array<double, 4> b{0.0, 0.0, 0.0, 1.0};
  CHECK_THROWS_AS(cone_null_capacity(b, {{0.0, 0.0, 1.0}}, {16}), std::invalid_argument);
}

TEST_CASE("instability argument checks") {
  CHECK_THROWS_AS(instability_demo(kPi / 4, -0.1, 20), std::invalid_argument);
  CHECK_THROWS_AS(instability_demo(kPi / 4, 0.05, 4), std::invalid_argument);
  InstabilityOptions o;
  o.a = 2.0;
  CHECK_THROWS_AS(instability_demo(kPi / 4, 0.05, 20, o), std::invalid_argument);
}
