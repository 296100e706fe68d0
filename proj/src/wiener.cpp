#include "bicap/wiener.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>

#include "bicap/parallel.hpp"

namespace bicap {

LayerSeries layer_capacities(const LayerFamily& family, double a, int j_max,
                             const LayerOptions& opts) {
  if (!(a >= 2.0)) throw std::invalid_argument("layer_capacities: a must be at least 2");
  if (j_max < opts.j_min) throw std::invalid_argument("layer_capacities: empty layer range");
  LayerSeries out;
  out.a = a;
  out.span = opts.span;
  out.j_min = opts.j_min;
  out.j_max = j_max;
  out.resolution = opts.resolution;

  const double top = opts.span == LayerSpan::Single ? a : a * a;
  const CapacityDomain domain = AnnulusDomain{0.5, 2.0 * top};

  const int n = j_max - opts.j_min + 1;
  std::vector<Discretization> unique;
  std::vector<int> slot(n, -1);
  std::map<std::string, int> seen;
  for (int k = 0; k < n; ++k) {
    const auto layer = family(opts.j_min + k);
    if (!layer) continue;
    CapacityProblem p{*layer, domain, opts.resolution, opts.cg, opts.neighbourhood};
    Discretization d;
    try {
      d = discretize(p);
    } catch (const EmptyCompactumError&) {
      continue;
    }
    std::string key(d.fixed.begin(), d.fixed.end());
    auto [it, inserted] = seen.emplace(std::move(key), static_cast<int>(unique.size()));
    if (inserted) unique.push_back(std::move(d));
    slot[k] = it->second;
  }

  std::vector<GramMatrix> grams(unique.size());
  parallel_for(unique.size(), [&](std::size_t i) { grams[i] = cap_gram(unique[i], opts.cg); });

  double partial = 0.0;
  for (int k = 0; k < n; ++k) {
    LayerTerm t;
    t.j = opts.j_min + k;
    t.weight = std::pow(a, -t.j);
    if (slot[k] >= 0) {
      const GramMatrix& g = grams[slot[k]];
      t.empty = false;
      t.gram = std::pow(a, t.j) * g.g;
      const CapInf c = cap_inf(g.g);
      t.gamma = std::pow(a, t.j) * std::max(c.value, 0.0);
      t.b_min = c.b_min;
      t.term = std::max(c.value, 0.0);
      for (const auto& s : g.stats) t.iterations += s.iterations;
    }
    partial += t.term;
    t.partial = partial;
    out.terms.push_back(t);
  }
  return out;
}

std::vector<double> sufficiency_sum(const LayerSeries& series) {
  std::vector<double> s;
  s.reserve(series.terms.size());
  double acc = 0.0;
  for (const auto& t : series.terms) {
    acc += t.weight * t.gamma;
    s.push_back(acc);
  }
  return s;
}

NecessitySum necessity_sum(const LayerSeries& series) {
  if (series.span != LayerSpan::Double) {
    throw std::invalid_argument("necessity_sum: series must use doubled layers");
  }
  NecessitySum out;
  Eigen::Matrix4d acc = Eigen::Matrix4d::Zero();
  for (const auto& t : series.terms) {
    acc += t.weight * t.gram;
    const Eigen::Matrix4d sym = 0.5 * (acc + acc.transpose());
    const CapInf c = cap_inf(sym);
    out.values.push_back(std::max(c.value, 0.0));
    out.b_min = c.b_min;
  }
  if (series.terms.empty()) out.b_min = PiProfile::basis(0);
  return out;
}

std::string to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::AnalyticDivergent: return "analytic_divergent";
    case VerdictKind::AnalyticConvergent: return "analytic_convergent";
    case VerdictKind::NumericTrend: return "numeric_trend";
  }
  return "unknown";
}

std::string to_string(TrendModel m) {
  switch (m) {
    case TrendModel::Bounded: return "bounded";
    case TrendModel::Logarithmic: return "logarithmic";
    case TrendModel::Linear: return "linear";
  }
  return "unknown";
}

namespace {

// Residual sum of squares of y ~ A + B basis.
double fit_rss(const std::vector<double>& basis, const std::vector<double>& y) {
  const int n = static_cast<int>(y.size());
  Eigen::MatrixXd x(n, 2);
  Eigen::VectorXd rhs(n);
  for (int i = 0; i < n; ++i) {
    x(i, 0) = 1.0;
    x(i, 1) = basis[i];
    rhs(i) = y[i];
  }
  const Eigen::VectorXd c = x.colPivHouseholderQr().solve(rhs);
  return (x * c - rhs).squaredNorm();
}

}  // namespace

RegularityVerdict verdict(const std::vector<double>& partial_sums) {
  const int n = static_cast<int>(partial_sums.size());
  if (n < 8) throw std::invalid_argument("verdict: at least 8 partial sums are required");
  RegularityVerdict v;
  v.partial_sums = partial_sums;
  v.source = "numeric layers";

  const int first = n / 2;
  std::vector<double> l, y;
  for (int i = first; i < n; ++i) {
    l.push_back(i + 1.0);
    y.push_back(partial_sums[i]);
  }
  auto transformed = [&](auto f) {
    std::vector<double> b(l.size());
    std::transform(l.begin(), l.end(), b.begin(), f);
    return b;
  };

  double bounded = fit_rss(transformed([](double x) { return 1.0 / x; }), y);
  bounded = std::min(bounded, fit_rss(transformed([](double x) { return 1.0 / (x * x); }), y));
  for (int k = 0; k <= 75; ++k) {
    const double q = 0.05 + 0.01 * k;
    bounded = std::min(bounded, fit_rss(transformed([q](double x) { return std::pow(q, x); }), y));
  }
  const double logarithmic = fit_rss(transformed([](double x) { return std::log(x); }), y);
  const double linear = fit_rss(l, y);
  v.model_residuals = {bounded, logarithmic, linear};

  double mean = 0.0;
  for (double s : y) mean += s;
  mean /= static_cast<double>(y.size());
  double spread = 0.0;
  for (double s : y) spread += (s - mean) * (s - mean);
  const double best = *std::min_element(v.model_residuals.begin(), v.model_residuals.end());
  const double tie = best + 1e-6 * spread + 1e-300;
  const TrendModel order[3] = {TrendModel::Bounded, TrendModel::Logarithmic, TrendModel::Linear};
  for (int m = 0; m < 3; ++m) {
    if (v.model_residuals[m] <= tie) {
      v.model = order[m];
      break;
    }
  }

  // Tail exponent from the increments of the last half.
  std::vector<double> lx, ly;
  for (int i = std::max(first, 1); i < n; ++i) {
    const double d = partial_sums[i] - partial_sums[i - 1];
    if (!(d > 0.0)) {
      lx.clear();
      break;
    }
    lx.push_back(std::log(i + 1.0));
    ly.push_back(std::log(d));
  }
  if (lx.size() >= 2) {
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      mx += lx[i];
      my += ly[i];
    }
    mx /= lx.size();
    my /= ly.size();
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sxy += (lx[i] - mx) * (ly[i] - my);
      sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    v.tail_exponent = -sxy / sxx;
  } else {
    v.tail_exponent = std::numeric_limits<double>::quiet_NaN();
  }
  return v;
}

double decay_factor(const LayerSeries& series, int l) {
  if (series.j_min > 2) throw std::out_of_range("decay_factor: series must start at j <= 2");
  if (l < 2 || l > series.j_max) throw std::out_of_range("decay_factor: l outside [2, j_max]");
  double s = 0.0;
  for (const auto& t : series.terms) {
    if (t.j >= 2 && t.j <= l) s += t.weight * t.gamma;
  }
  return s;
}

}  // namespace bicap
