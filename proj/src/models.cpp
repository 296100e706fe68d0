#include "bicap/models.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "bicap/parallel.hpp"

namespace bicap {

CuspProfile CuspProfile::power(double k, double lambda, double c) {
  if (!(k > 0.0) || lambda < 0.0) throw std::invalid_argument("cusp: power family needs k > 0, lambda >= 0");
  CuspProfile p;
  p.h = [k, lambda](double s) { return k * std::pow(s, lambda); };
  p.c = c;
  p.family = CuspFamily::Power;
  p.coefficient = k;
  p.exponent = lambda;
  return p;
}

CuspProfile CuspProfile::inverse_log(double pw, double c) {
  if (!(c < 1.0)) throw std::invalid_argument("cusp: inverse-log family needs c < 1");
  if (!(pw > 0.0)) throw std::invalid_argument("cusp: inverse-log exponent must be positive");
  CuspProfile p;
  p.h = [pw](double s) { return std::pow(std::log(1.0 / s), -pw); };
  p.c = c;
  p.family = CuspFamily::InverseLog;
  p.exponent = pw;
  return p;
}

CuspProfile CuspProfile::custom(std::function<double(double)> h, double c) {
  CuspProfile p;
  p.h = std::move(h);
  p.c = c;
  return p;
}

void CuspProfile::validate() const {
  if (!h) throw std::invalid_argument("cusp: profile has no function");
  if (!(c > 0.0)) throw std::invalid_argument("cusp: outer radius must be positive");
  double prev = 0.0;
  for (int k = 60; k >= 1; --k) {
    const double s = c * std::pow(2.0, -0.25 * k);
    const double v = h(s);
    if (!(v > 0.0) || v > kPi) throw std::invalid_argument("cusp: profile values must lie in (0, pi]");
    if (v < prev * (1.0 - 1e-12)) throw std::invalid_argument("cusp: profile must be nondecreasing");
    prev = v;
  }
}

LayerBounds cusp_layer_bounds(const CuspProfile& h, double s, double a) {
  h.validate();
  if (!(s > 0.0) || !(a * s < h.c)) throw std::invalid_argument("cusp_layer_bounds: layer leaves (0, c)");
  const double v = h(s) * h(s) / s;
  return {kCuspLowerConstant * v, kCuspUpperConstant * v};
}

CapInf cusp_layer_capacity(const CuspProfile& h, double s, double a, int resolution,
                           const CgOptions& cg) {
  h.validate();
  if (!(s > 0.0) || !(a * s < h.c)) throw std::invalid_argument("cusp_layer_capacity: layer leaves (0, c)");
  auto fn = h.h;
  CompactumSpec k(CuspLayerShape{[fn, s](double r) { return fn(s * r); }, 1.0, a});
  CapacityProblem p{k, SlabDomain{{-a, -a, 0.5}, {a, a, 1.5 * a}, true}, resolution, cg,
                    Neighbourhood::Dilated};
  CapInf out = cap_inf(cap_gram(p).g);
  out.value /= s;
  return out;
}

std::vector<double> cusp_integral_partials(const CuspProfile& h, int levels) {
  std::vector<double> out;
  out.reserve(levels);
  double acc = 0.0;
  constexpr int kPanels = 32;  // Simpson in log s over each dyadic interval
  for (int k = 1; k <= levels; ++k) {
    const double lo = std::log(h.c) - k * std::log(2.0);
    const double hi = lo + std::log(2.0);
    const double du = (hi - lo) / kPanels;
    double sum = 0.0;
    for (int i = 0; i <= kPanels; ++i) {
      const double v = h(std::exp(lo + i * du));
      const double w = (i == 0 || i == kPanels) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      sum += w * v * v;
    }
    acc += sum * du / 3.0;
    out.push_back(acc);
  }
  return out;
}

RegularityVerdict cusp_criterion(const CuspProfile& h) {
  h.validate();
  const auto partials = cusp_integral_partials(h);
  std::ostringstream src;
  if (h.family == CuspFamily::Power) {
    RegularityVerdict v;
    v.partial_sums = partials;
    v.kind = h.exponent == 0.0 ? VerdictKind::AnalyticDivergent : VerdictKind::AnalyticConvergent;
    src << "closed form: h = " << h.coefficient << " s^" << h.exponent;
    v.source = src.str();
    return v;
  }
  if (h.family == CuspFamily::InverseLog) {
    RegularityVerdict v;
    v.partial_sums = partials;
    v.kind = h.exponent <= 0.5 ? VerdictKind::AnalyticDivergent : VerdictKind::AnalyticConvergent;
    src << "closed form: h = (log 1/s)^-" << h.exponent;
    v.source = src.str();
    return v;
  }
  RegularityVerdict v = verdict(partials);
  v.source = "quadrature of s^-1 h(s)^2";
  return v;
}

std::vector<double> point_set_capacity_sequence(const std::vector<Vec3>& points,
                                                const PiProfile& p,
                                                const std::vector<int>& resolutions,
                                                const CgOptions& cg) {
  std::vector<double> out(resolutions.size(), 0.0);
  if (points.empty()) return out;
  const CompactumSpec k(PointSetShape{points, {}});
  for (std::size_t i = 0; i < resolutions.size(); ++i) {
    CapacityProblem prob = CapacityProblem::around(k, resolutions[i]);
    prob.cg = cg;
    out[i] = cap_p(prob, p).value;
  }
  return out;
}

std::vector<double> cone_null_capacity(const std::array<double, 4>& b,
                                       const std::vector<Vec3>& points,
                                       const std::vector<int>& resolutions,
                                       const CgOptions& cg) {
  const PiProfile p = PiProfile{b}.normalized();
  for (const auto& x : points) {
    if (std::abs(eval_lifted(p, x)) > 1e-9 * norm(x)) {
      throw std::invalid_argument("cone_null_capacity: point off the cone");
    }
  }
  return point_set_capacity_sequence(points, p, resolutions, cg);
}

namespace {

void check_four_point(double alpha, double beta) {
  if (!(alpha > 0.0 && alpha < 0.5 * kPi)) throw std::invalid_argument("four point: alpha outside (0, pi/2)");
  if (!(std::abs(beta - alpha) < 0.5 * alpha)) {
    throw std::invalid_argument("four point: |beta - alpha| must be below alpha/2");
  }
}

Vec3 spherical_point(double r, double phi, double theta) {
  return {r * std::sin(theta) * std::cos(phi), r * std::sin(theta) * std::sin(phi),
          r * std::cos(theta)};
}

double min_eig(const Eigen::Matrix4d& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

}  // namespace

Eigen::Matrix4d four_point_matrix(double alpha, double beta) {
  check_four_point(alpha, beta);
  const double sa = std::sin(alpha), ca = std::cos(alpha);
  Eigen::Matrix4d m;
  m << 1.0, 1.0, 1.0, 1.0,
       sa, 0.0, -sa, 0.0,
       0.0, sa, 0.0, -std::sin(beta),
       ca, ca, ca, std::cos(beta);
  return m;
}

std::array<Vec3, 4> four_point_layer(double alpha, double beta, int k, double a) {
  check_four_point(alpha, beta);
  const double r = std::pow(a, -k);
  return {spherical_point(r, 0.0, alpha), spherical_point(r, 0.5 * kPi, alpha),
          spherical_point(r, kPi, alpha), spherical_point(std::sqrt(a) * r, 1.5 * kPi, beta)};
}

double four_point_c0(double alpha) {
  check_four_point(alpha, alpha);
  constexpr int kSamples = 20000;
  double c0 = 0.0;
  for (int i = 1; i < kSamples; ++i) {
    const double beta = 0.5 * alpha + alpha * i / kSamples;
    const double den = std::abs(std::cos(alpha) - std::cos(beta));
    if (den > 0.0) c0 = std::max(c0, std::abs(alpha - beta) / den);
  }
  return c0;
}

FourPointBound four_point_lower_bound_check(double alpha, double beta) {
  const Eigen::Matrix4d m = four_point_matrix(alpha, beta);
  FourPointBound out;
  out.lambda_min = std::max(min_eig(m * m.transpose()), 0.0);
  const double c0 = four_point_c0(alpha);
  const double sa = std::sin(alpha);
  out.bound = sa * sa / (c0 * c0) * (alpha - beta) * (alpha - beta) / 100.0;
  out.holds = out.lambda_min >= out.bound;
  return out;
}

namespace {

// Layers of a point configuration given at unit scale: layer j holds
// points(j), already dilated by ratio^j. Identical point sets share one
// solve.
LayerSeries point_layer_series(const std::function<std::vector<Vec3>(int)>& points, double ratio,
                               double top, int j_min, int j_max, LayerSpan span,
                               const InstabilityOptions& opts) {
  LayerSeries out;
  out.a = ratio;
  out.span = span;
  out.j_min = j_min;
  out.j_max = j_max;
  out.resolution = opts.resolution;
  const CapacityDomain domain = AnnulusDomain{0.5, 2.0 * top};

  std::vector<std::vector<Vec3>> unique;
  std::map<std::vector<long long>, int> seen;
  std::vector<int> slot;
  for (int j = j_min; j <= j_max; ++j) {
    const auto pts = points(j);
    if (pts.empty()) {
      slot.push_back(-1);
      continue;
    }
    std::vector<long long> key;
    for (const auto& p : pts) {
      for (double c : p) key.push_back(std::llround(c * 1e9));
    }
    auto [it, inserted] = seen.emplace(key, static_cast<int>(unique.size()));
    if (inserted) unique.push_back(pts);
    slot.push_back(it->second);
  }
  std::vector<PointGram> grams(unique.size());
  parallel_for(unique.size(), [&](std::size_t i) {
    grams[i] = point_cap_gram(unique[i], domain, opts.resolution, opts.cg);
  });

  double partial = 0.0;
  for (int j = j_min; j <= j_max; ++j) {
    LayerTerm t;
    t.j = j;
    t.weight = std::pow(ratio, -j);
    const int s = slot[j - j_min];
    if (s >= 0) {
      const PointGram& g = grams[s];
      const CapInf c = cap_inf(g.g);
      t.empty = false;
      t.gram = std::pow(ratio, j) * g.g;
      t.gamma = std::pow(ratio, j) * std::max(c.value, 0.0);
      t.b_min = c.b_min;
      t.term = std::max(c.value, 0.0);
      t.iterations = g.iterations;
    }
    partial += t.term;
    t.partial = partial;
    out.terms.push_back(t);
  }
  return out;
}

}  // namespace

InstabilityReport instability_demo(double alpha, double epsilon, int k_max,
                                   const InstabilityOptions& opts) {
  if (epsilon < 0.0) throw std::invalid_argument("instability_demo: epsilon must be nonnegative");
  if (!(opts.a >= 4.0)) throw std::invalid_argument("instability_demo: layer ratio must be at least 4");
  if (k_max < 8) throw std::invalid_argument("instability_demo: at least 8 layers are needed");
  const double a = opts.a;
  const double beta = alpha + epsilon;
  check_four_point(alpha, beta);

  // Points of layer k scaled by a^scale_k.
  auto layer_points = [a, alpha](double b, int k, int scale_k) {
    auto pts = four_point_layer(alpha, b, k, a);
    const double f = std::pow(a, scale_k);
    std::vector<Vec3> out;
    for (const auto& p : pts) out.push_back(f * p);
    return out;
  };

  InstabilityReport rep;

  // On-cone configuration, doubled layers [a^-j, a^-j+2) hold layers j and j-1.
  const LayerSeries doubled = point_layer_series(
      [&](int j) {
        auto pts = layer_points(alpha, j, j);
        if (j - 1 >= 1) {
          auto more = layer_points(alpha, j - 1, j);
          pts.insert(pts.end(), more.begin(), more.end());
        }
        return pts;
      },
      a, a * a, 1, k_max, LayerSpan::Double, opts);
  rep.on_cone = necessity_sum(doubled);
  rep.on_cone_verdict = verdict(rep.on_cone.values);

  rep.perturbed = point_layer_series([&](int k) { return layer_points(beta, k, k); }, a, a, 1,
                                     k_max, LayerSpan::Single, opts);
  rep.perturbed_sums = sufficiency_sum(rep.perturbed);
  rep.perturbed_verdict = verdict(rep.perturbed_sums);
  double acc = 0.0;
  for (int k = 1; k <= k_max; ++k) {
    acc += (beta - alpha) * (beta - alpha);
    rep.lower_bound_sums.push_back(acc);
  }

  // Re-binning the perturbed configuration at ratio b = a^(1/5): bin
  // [b^-j, b^-j+1) holds A_1..A_3 of layer k when j = 5k and A_4 of layer
  // k when j = 5k - 2.
  const double b = std::pow(a, 0.2);
  const LayerSeries rebinned = point_layer_series(
      [&](int j) {
        std::vector<Vec3> pts;
        const double f = std::pow(b, j);
        for (int k = 1; k <= k_max; ++k) {
          const auto layer = four_point_layer(alpha, beta, k, a);
          if (j == 5 * k) {
            for (int i = 0; i < 3; ++i) pts.push_back(f * layer[i]);
          } else if (j == 5 * k - 2) {
            pts.push_back(f * layer[3]);
          }
        }
        return pts;
      },
      b, b, 1, 5 * k_max, LayerSpan::Single, opts);
  for (const auto& t : rebinned.terms) rep.rebinned_caps.push_back(t.term);
  return rep;
}

}  // namespace bicap
