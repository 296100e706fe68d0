#include <doctest.h>

#include <cmath>

#include "bicap/wiener.hpp"

using namespace bicap;

namespace {

std::vector<double> sums(int n, double (*f)(int)) {
  std::vector<double> s;
  for (int l = 1; l <= n; ++l) s.push_back(f(l));
  return s;
}

}  // namespace

TEST_CASE("verdict recognises the three trends") {
  const auto bounded = verdict(sums(20, [](int l) { return 3.0 - std::pow(0.5, l); }));
  CHECK(bounded.kind == VerdictKind::NumericTrend);
  CHECK(*bounded.model == TrendModel::Bounded);
  const auto logarithmic = verdict(sums(20, [](int l) { return 0.7 * std::log(double(l)) + 1.0; }));
  CHECK(*logarithmic.model == TrendModel::Logarithmic);
  const auto linear = verdict(sums(20, [](int l) { return 0.25 * l + 0.1; }));
  CHECK(*linear.model == TrendModel::Linear);
  CHECK(linear.partial_sums.size() == 20);
}

TEST_CASE("verdict needs eight sums") {
  CHECK_THROWS_AS(verdict({1, 2, 3, 4, 5, 6, 7}), std::invalid_argument);
}

TEST_CASE("series of identical unit-scale layers") {
  // The same shell in every layer: one solve, gamma_j = a^j gamma_0, so
  // every term a^-j gamma_j is the same.
  LayerFamily shells = [](int) { return CompactumSpec(ShellShape{1.2, 1.6, 0.0}); };
  LayerOptions opts;
  opts.j_min = 1;
  opts.resolution = 20;
  const LayerSeries s = layer_capacities(shells, 2.0, 4, opts);
  REQUIRE(s.terms.size() == 4);
  for (const auto& t : s.terms) {
    CHECK_FALSE(t.empty);
    CHECK(t.term == doctest::Approx(s.terms[0].term).epsilon(1e-12));
    CHECK(t.weight == doctest::Approx(std::pow(2.0, -t.j)));
    CHECK(t.gamma * t.weight == doctest::Approx(t.term).epsilon(1e-12));
  }
  // All four layers share one solve.
  CHECK(s.terms[3].iterations == s.terms[0].iterations);
  const auto ss = sufficiency_sum(s);
  CHECK(ss.back() == doctest::Approx(4 * s.terms[0].term).epsilon(1e-12));
  CHECK(s.terms.back().partial == doctest::Approx(ss.back()).epsilon(1e-12));
  CHECK_THROWS_AS(necessity_sum(s), std::invalid_argument);
  CHECK(decay_factor(s, 4) == doctest::Approx(3 * s.terms[0].term).epsilon(1e-12));
  CHECK_THROWS_AS(decay_factor(s, 5), std::out_of_range);
  CHECK_THROWS_AS(decay_factor(s, 1), std::out_of_range);
}

TEST_CASE("empty layers contribute nothing") {
  LayerFamily alt = [](int j) -> std::optional<CompactumSpec> {
    if (j % 2) return std::nullopt;
    return CompactumSpec(ShellShape{1.2, 1.6, 0.0});
  };
  LayerOptions opts;
  opts.resolution = 20;
  opts.span = LayerSpan::Double;
  const LayerSeries s = layer_capacities(alt, 2.0, 3, opts);
  CHECK(s.terms[1].empty);
  CHECK(s.terms[1].term == 0.0);
  const NecessitySum n = necessity_sum(s);
  REQUIRE(n.values.size() == 4);
  CHECK(n.values[1] == doctest::Approx(n.values[0]));
  CHECK(n.values[2] >= n.values[1]);
}

TEST_CASE("argument checks") {
  LayerFamily f = [](int) { return CompactumSpec(BallShape{{0, 0, 1.5}, 0.2}); };
  CHECK_THROWS_AS(layer_capacities(f, 1.5, 3), std::invalid_argument);
  LayerOptions opts;
  opts.j_min = 5;
  CHECK_THROWS_AS(layer_capacities(f, 2.0, 3, opts), std::invalid_argument);
}
