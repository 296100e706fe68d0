#include "bicap/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>

#include "bicap/biharm.hpp"
#include "bicap/capacity.hpp"
#include "bicap/forms.hpp"
#include "bicap/kernel.hpp"
#include "bicap/models.hpp"
#include "bicap/report.hpp"
#include "bicap/sphere.hpp"
#include "bicap/wiener.hpp"

namespace bicap {

using nlohmann::json;

bool SuiteResult::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

const Check& SuiteResult::check(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  throw std::logic_error("suite " + suite + " has no check '" + name + "'");
}

json to_json(const SuiteResult& r) {
  json checks = json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name},
                      {"value", std::isfinite(c.value) ? json(c.value) : json(nullptr)},
                      {"limit", c.limit},
                      {"relation", c.relation},
                      {"pass", c.pass}});
  }
  return {{"suite", r.suite}, {"passed", r.passed()}, {"checks", checks}, {"data", r.data}};
}

namespace {

class Checks {
 public:
  explicit Checks(SuiteResult& r) : r_(r) {}
  void le(const std::string& name, double v, double limit) { add(name, v, limit, "<=", v <= limit); }
  void ge(const std::string& name, double v, double limit) { add(name, v, limit, ">=", v >= limit); }
  void lt(const std::string& name, double v, double limit) { add(name, v, limit, "<", v < limit); }
  void truth(const std::string& name, bool ok) { add(name, ok ? 1.0 : 0.0, 1.0, "==", ok); }

 private:
  void add(const std::string& name, double v, double limit, const char* rel, bool ok) {
    r_.checks.push_back({name, v, limit, rel, ok && std::isfinite(v)});
  }
  SuiteResult& r_;
};

double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

PiProfile random_profile(std::mt19937_64& rng) {
  for (;;) {
    PiProfile p;
    double n2 = 0.0;
    for (double& b : p.b) {
      b = 2.0 * unit_uniform(rng) - 1.0;
      n2 += b * b;
    }
    if (n2 > 1e-4 && n2 <= 1.0) {
      for (double& b : p.b) b /= std::sqrt(n2);
      return p;
    }
  }
}

double bump(double t) { return std::abs(t) >= 1.0 ? 0.0 : std::exp(-1.0 / (1.0 - t * t)); }

// Least-squares slope of log err against log n, negated.
double convergence_order(const std::vector<int>& n, const std::vector<double>& err) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    mx += std::log(n[i]);
    my += std::log(err[i]);
  }
  mx /= n.size();
  my /= n.size();
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    sxx += (std::log(n[i]) - mx) * (std::log(n[i]) - mx);
    sxy += (std::log(n[i]) - mx) * (std::log(err[i]) - my);
  }
  return -sxy / sxx;
}

// ---------------------------------------------------------------------------

void kernel_suite(SuiteResult& r, const VerifyOptions&) {
  Checks c(r);
  double res = 0.0;
  const int m = 10000;
  for (int i = 0; i < m; ++i) {
    const double t = -20.0 + 40.0 * (i + 0.5) / m;
    res = std::max(res, std::abs(ode_residual(t)));
  }
  c.lt("ode_residual_max", res, 1e-12);
  c.le("g0_error", std::abs(g(0.0) - 1.0 / 3.0), 4 * std::numeric_limits<double>::epsilon());
  c.le("w2_0_error", std::abs(weight_w2(0.0) - 7.0 / 6.0), 4 * std::numeric_limits<double>::epsilon());
  const double jump = g_deriv(0.0, 3, Side::Right) - g_deriv(0.0, 3, Side::Left);
  c.le("third_derivative_jump_error", std::abs(jump - 1.0), 1e-9);
  double w1min = INFINITY, w2min = INFINITY, wdef = 0.0;
  for (int i = 0; i <= m; ++i) {
    const double t = -50.0 + 100.0 * i / m;
    const double w1 = weight_w1(t), w2 = weight_w2(t);
    w1min = std::min(w1min, w1);
    w2min = std::min(w2min, w2);
    const Side side = t < 0 ? Side::Left : Side::Right;
    const double d1 = g_deriv(t, 1, side), d2 = g_deriv(t, 2, side);
    // Relative to the size of the terms; the sums cancel for large t.
    const double g0 = g(t), scale = std::abs(g0) + std::abs(d1) + std::abs(d2);
    wdef = std::max(wdef, std::abs(w1 + d2 + d1) / (w1 + scale));
    wdef = std::max(wdef, std::abs(w2 + 2 * d2 + 3 * d1 - g0) / (w2 + scale));
  }
  c.truth("w1_positive", w1min > 0.0);
  c.truth("w2_positive", w2min > 0.0);
  c.le("weights_match_derivatives", wdef, 1e-12);
  r.data = {{"ode_residual_max", res}, {"jump", jump}, {"w1_min", w1min}, {"w2_min", w2min}};
}

// ---------------------------------------------------------------------------

struct TestField {
  std::string name;
  std::function<double(double t, const Vec3& w)> f;
};

std::vector<TestField> identity_fields() {
  return {
      {"radial", [](double t, const Vec3&) { return bump(t); }},
      {"dipole", [](double t, const Vec3& w) { return bump(t) * (1.0 + 0.5 * w[0]); }},
      {"mixed",
       [](double t, const Vec3& w) {
         return bump(t) * (1.0 + 0.5 * w[0] + 0.3 * w[2] * w[1] + 0.2 * std::exp(w[2]));
       }},
      {"quadrupole_shifted",
       [](double t, const Vec3& w) { return bump(1.25 * (t - 0.1)) * (w[0] * w[0] - w[1] * w[2] + 0.4); }},
      {"coupled",
       [](double t, const Vec3& w) { return bump(t) * (1.0 + 0.6 * t * w[2] + 0.2 * w[0] * w[1] * w[2]); }},
  };
}

AnnulusGrid identity_grid(int n) { return AnnulusGrid(std::exp(-1.3), std::exp(1.3), n, n / 2, n); }

AnnulusField sample_field(const AnnulusGrid& g, const TestField& tf) {
  return sample(g, [&](const Vec3& x) {
    const double r = norm(x);
    return tf.f(-std::log(r), (1.0 / r) * x);
  });
}

void identity_suite(SuiteResult& r, const VerifyOptions&) {
  Checks c(r);
  const std::vector<int> ns{32, 48, 64};
  const auto fields = identity_fields();
  double psi_err64 = 0, id_err64 = 0, psi_order = INFINITY, id_order = INFINITY;
  double split_err = 0, profile_err = 0;
  json per = json::array();
  PiProfile p{{0.7, 0.2, -0.3, 0.5}};
  for (const auto& tf : fields) {
    std::vector<double> ep, ei;
    double pe = 0.0;
    for (int n : ns) {
      const AnnulusGrid g = identity_grid(n);
      const AnnulusField u = sample_field(g, tf);
      const double de = delta_energy(u);
      const double ps = psi_form(u).value;
      ep.push_back(std::abs(ps - de) / de);
      const IdentityCheck ic = main_identity_check(u, WeightProfile::kernel(g, 0.3));
      ei.push_back(std::abs(ic.lhs - ic.rhs.value) / std::abs(ic.rhs.value));
      if (n == ns.back()) {
        const AnnulusField v = log_field(u);
        for (double tau : {0.0, 0.3}) {
          const WeightProfile wp = WeightProfile::kernel(g, tau);
          const double d = b_form(v, v, wp).value - b_tilde_form(v, v, wp).value -
                           0.5 * sphere_product(v, v, tau);
          split_err = std::max(split_err, std::abs(d));
        }
        const AnnulusField pw = sample(g, [&](const Vec3& x) {
          const double rr = norm(x);
          return eval(p, x) - tf.f(-std::log(rr), (1.0 / rr) * x);
        });
        pe = std::abs(psi_form(pw).value - ps) / ps;
        profile_err = std::max(profile_err, pe);
      }
    }
    const double po = convergence_order(ns, ep), io = convergence_order(ns, ei);
    psi_err64 = std::max(psi_err64, ep.back());
    id_err64 = std::max(id_err64, ei.back());
    psi_order = std::min(psi_order, po);
    id_order = std::min(id_order, io);
    per.push_back({{"field", tf.name}, {"psi_vs_energy", ep}, {"identity", ei},
                   {"psi_order", po}, {"identity_order", io}, {"profile_shift", pe}});
  }
  c.lt("psi_energy_rel_err_n64", psi_err64, 0.02);
  c.lt("main_identity_rel_err_n64", id_err64, 0.02);
  c.ge("psi_energy_order", psi_order, 1.5);
  c.ge("main_identity_order", id_order, 1.5);
  c.le("b_minus_btilde_vs_half_sphere_product", split_err, 1e-10);
  // Discretization error of the field itself bounds the profile shift.
  c.le("psi_profile_shift_rel", profile_err, psi_err64);
  r.data = {{"resolutions", ns}, {"fields", per}};
}

// ---------------------------------------------------------------------------

// b^T G b on one discretization with the free nodes cut down by `keep`.
double gram_quadratic(Discretization d, const std::function<bool(const Vec3&)>& keep,
                      const PiProfile& p, const CgOptions& cg) {
  for (std::size_t i = 0; i < d.grid.size(); ++i) {
    if (d.domain[i] && !d.fixed[i] && !keep(d.grid.node(i))) d.domain[i] = 0;
  }
  const Eigen::Matrix4d g = cap_gram(d, cg).g;
  const Eigen::Vector4d b(p.b[0], p.b[1], p.b[2], p.b[3]);
  return b.dot(g * b);
}

void capacity_suite(SuiteResult& r, const VerifyOptions& opts) {
  Checks c(r);
  std::mt19937_64 rng(opts.seed);
  const CgOptions tight{1e-10, 0};

  // Harmonic capacity of a ball against 4 pi r.
  const double rb = 0.25;
  CapacityProblem ball{CompactumSpec(BallShape{{0, 0, 0}, rb}), BoxDomain{4 * rb, {0, 0, 0}, false}, 96,
                       tight, Neighbourhood::Core};
  const double hcap = harmonic_cap(ball, {true, {0, 0, 0}}).value;
  c.le("harmonic_ball_rel_err", std::abs(hcap / (4 * kPi * rb) - 1.0), 0.05);

  // Scaling law: the same set at scale s and at unit scale.
  const PiProfile ps = random_profile(rng);
  const double s = 0.25;
  const CompactumSpec k1(BallShape{{0.2, 0.0, 1.5}, 0.35});
  const CompactumSpec ks(BallShape{{0.2 * s, 0.0, 1.5 * s}, 0.35 * s});
  auto p1 = CapacityProblem::around(k1, 32);
  auto pss = CapacityProblem::around(ks, 32);
  p1.cg = pss.cg = tight;
  const double c1 = cap_p(p1, ps).value, cs = cap_p(pss, ps).value;
  c.le("scaling_law_rel_err", std::abs(s * cs / c1 - 1.0), 0.05);

  // Nested families on one grid.
  const AnnulusDomain box{0.5, 2.5};
  const int res = 40;
  std::vector<std::pair<std::string, std::vector<CompactumSpec>>> fam;
  auto cusp = [](double th) { return CompactumSpec(CuspLayerShape{[th](double) { return th; }, 1.0, 2.0}); };
  fam.push_back({"balls",
                 {CompactumSpec(BallShape{{0, 0, 1.5}, 0.2}), CompactumSpec(BallShape{{0, 0, 1.5}, 0.3}),
                  CompactumSpec(BallShape{{0, 0, 1.5}, 0.4})}});
  fam.push_back({"holed_shells",
                 {CompactumSpec(ShellShape{1.3, 1.4, 1.0}), CompactumSpec(ShellShape{1.2, 1.5, 0.8}),
                  CompactumSpec(ShellShape{1.1, 1.6, 0.6})}});
  fam.push_back({"plane_sections",
                 {CompactumSpec(ConeSectionShape{{0, 0, 0, 1}, 1.2, 1.8, 0.0}),
                  CompactumSpec(ConeSectionShape{{0, 0, 0, 1}, 1.1, 1.9, 0.1}),
                  CompactumSpec(ConeSectionShape{{0, 0, 0, 1}, 1.0, 2.0, 0.2})}});
  const Vec3 q1{1.5, 0, 0}, q2{0, 1.2, 0.6}, q3{-0.7, -0.7, -0.9};
  fam.push_back({"point_sets",
                 {CompactumSpec(PointSetShape{{q1}, {}}), CompactumSpec(PointSetShape{{q1, q2}, {}}),
                  CompactumSpec(PointSetShape{{q1, q2, q3}, {}})}});
  fam.push_back({"cusp_apertures", {cusp(0.2), cusp(0.3), cusp(0.45)}});

  double k_viol = -INFINITY, o_viol = -INFINITY;
  json mono = json::array();
  for (const auto& [name, sets] : fam) {
    const PiProfile p = random_profile(rng);
    std::vector<double> vals;
    for (const auto& k : sets) {
      CapacityProblem pb{k, box, res, tight, Neighbourhood::Dilated};
      vals.push_back(cap_p(pb, p).value);
    }
    for (std::size_t i = 0; i + 1 < vals.size(); ++i) k_viol = std::max(k_viol, (vals[i] - vals[i + 1]) / vals[i + 1]);
    mono.push_back({{"family", name}, {"in", "K"}, {"values", vals}});

    // Shrinking the domain around the largest set.
    const Discretization d = discretize({sets.back(), box, res, tight, Neighbourhood::Dilated});
    std::vector<double> dv{gram_quadratic(d, [](const Vec3& x) { return norm(x) < 2.5; }, p, tight),
                           gram_quadratic(d, [](const Vec3& x) { return norm(x) < 2.25 && norm(x) > 0.6; }, p, tight),
                           gram_quadratic(d, [](const Vec3& x) { return norm(x) < 2.1 && norm(x) > 0.75; }, p, tight)};
    for (std::size_t i = 0; i + 1 < dv.size(); ++i) o_viol = std::max(o_viol, (dv[i] - dv[i + 1]) / dv[i + 1]);
    mono.push_back({{"family", name}, {"in", "domain"}, {"values", dv}});
  }
  c.le("monotone_in_K_violation", k_viol, 1e-6);
  c.le("antitone_in_domain_violation", o_viol, 1e-6);

  // Gram form against direct minimization.
  auto pg = CapacityProblem::around(CompactumSpec(BallShape{{0.3, 0.2, 1.4}, 0.3}), 32);
  pg.cg = tight;
  const GramMatrix gm = cap_gram(pg);
  double gerr = 0.0;
  for (int i = 0; i < 20; ++i) {
    const PiProfile p = random_profile(rng);
    const Eigen::Vector4d b(p.b[0], p.b[1], p.b[2], p.b[3]);
    const double direct = cap_p(pg, p).value;
    gerr = std::max(gerr, std::abs(b.dot(gm.g * b) - direct) / direct);
  }
  c.le("gram_quadratic_form_rel_err", gerr, 1e-6);

  // s Cap(closed annulus C_{s,2s}) across two decades.
  std::vector<double> cs_vals;
  for (double sc : {0.25, 1.0, 4.0}) {
    auto pa = CapacityProblem::around(CompactumSpec(ShellShape{sc, 2.0 * sc, 0.0}), 32);
    pa.cg = tight;
    cs_vals.push_back(sc * cap_inf(cap_gram(pa).g).value);
  }
  double spread = 0.0;
  for (double v : cs_vals) spread = std::max(spread, std::abs(v / cs_vals[1] - 1.0));
  c.le("upper_bound_constant_spread", spread, 0.2);

  r.data = {{"harmonic_ball", hcap},
            {"harmonic_ball_exact", 4 * kPi * rb},
            {"scaling", {{"unit", c1}, {"scaled", cs}, {"s", s}, {"profile", to_json(ps)}}},
            {"monotonicity", mono},
            {"gram", to_json(gm)},
            {"upper_bound_constants", cs_vals}};
}

// ---------------------------------------------------------------------------

void spectral_suite(SuiteResult& r, const VerifyOptions&) {
  Checks c(r);
  const SphereOps so(16, 32);
  const std::size_t n = so.size();
  double gap_err = 0.0;
  json ratios = json::array();
  for (int l = 1; l <= 3; ++l) {
    for (int m = -l; m <= l; ++m) {
      std::vector<double> y(n), ly(n), gt(n), gp(n), sq(n), gg(n);
      for (int k = 0; k < so.n_theta(); ++k) {
        for (int j = 0; j < so.n_phi(); ++j) {
          const double th = so.theta(k), ph = 2.0 * kPi * j / so.n_phi();
          y[k * so.n_phi() + j] =
              real_harmonic(l, m, {std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)});
        }
      }
      so.laplace_beltrami(y, ly, AngularScheme::Spectral);
      so.gradient(y, gt, gp, AngularScheme::Spectral);
      for (std::size_t i = 0; i < n; ++i) {
        sq[i] = ly[i] * ly[i];
        gg[i] = gt[i] * gt[i] + gp[i] * gp[i];
      }
      const double ratio = so.integrate(sq) / so.integrate(gg);
      gap_err = std::max(gap_err, std::abs(ratio - l * (l + 1)));
      ratios.push_back({{"l", l}, {"m", m}, {"ratio", ratio}});
    }
  }
  c.le("spectral_gap_error", gap_err, 1e-6);

  // eps_h = max(0, 1/2 trace - b_form) over the test family.
  const std::vector<int> ns{32, 48, 64};
  std::vector<double> eps, margin;
  double bmax = 0.0;
  for (int nn : ns) {
    const AnnulusGrid g = identity_grid(nn);
    double e = 0.0, mr = INFINITY;
    for (const auto& tf : identity_fields()) {
      const AnnulusField v = log_field(sample_field(g, tf));
      for (double tau : {-0.5, 0.0, 0.3, 0.6}) {
        const double b = b_form(v, v, WeightProfile::kernel(g, tau)).value;
        const double half = 0.5 * sphere_trace(v, tau);
        e = std::max(e, half - b);
        mr = std::min(mr, b / half);
        bmax = std::max(bmax, b);
      }
    }
    eps.push_back(std::max(0.0, e));
    margin.push_back(mr);
  }
  c.le("trace_deficit_finest", eps.back(), 1e-9 * bmax);
  c.le("trace_deficit_nonincreasing", eps.back() - eps.front(), 0.0);
  r.data = {{"ratios", ratios}, {"resolutions", ns}, {"trace_deficit", eps}, {"min_form_over_half_trace", margin}};
}

// ---------------------------------------------------------------------------

std::vector<PointPair> lattice_pairs(const VoxelDomain& d, const Vec3& y) {
  std::vector<PointPair> out;
  for (int i = -3; i <= 3; ++i) {
    for (int j = -3; j <= 3; ++j) {
      for (int k = -3; k <= 3; ++k) {
        const Vec3 x{0.25 * i, 0.25 * j, 0.25 * k};
        if (d.depth(x) >= 0.2 && norm(x - y) >= 0.249) out.push_back({x, y});
      }
    }
  }
  return out;
}

std::optional<Vec3> interior_source(const VoxelDomain& d) {
  for (const Vec3& y : {Vec3{0.25, 0, 0}, Vec3{0, -0.25, 0.25}, Vec3{-0.25, 0.25, 0}, Vec3{0, 0, -0.25},
                        Vec3{0.25, 0.25, 0.25}}) {
    if (d.depth(y) >= 0.25) return y;
  }
  return std::nullopt;
}

void green_suite(SuiteResult& r, const VerifyOptions& opts) {
  Checks c(r);
  const std::uint64_t seeds[2] = {10 * opts.seed + 1, 20 * opts.seed + 3};
  json doms = json::array();
  for (int which = 0; which < 3; ++which) {
    std::vector<double> mixed, first;
    std::string name;
    std::size_t npairs = 0;
    for (int n : {48, 64}) {
      const VoxelDomain d = which == 0 ? punctured_ball_domain(n) : blob_domain(seeds[which - 1], n);
      name = d.name;
      const auto y = interior_source(d);
      if (!y) throw std::runtime_error("green suite: no interior source in " + d.name);
      const auto pairs = lattice_pairs(d, *y);
      npairs = pairs.size();
      const GradientSups s = mixed_gradient_sup(d, pairs, {1e-8, 0});
      mixed.push_back(s.mixed);
      first.push_back(s.first);
    }
    c.ge(name + "_pairs", double(npairs), 16);
    c.lt(name + "_mixed_change", std::abs(mixed[1] / mixed[0] - 1.0), 0.10);
    c.lt(name + "_first_change", std::abs(first[1] / first[0] - 1.0), 0.10);
    doms.push_back({{"domain", name}, {"resolutions", {48, 64}}, {"pairs", npairs},
                    {"mixed_sup", mixed}, {"first_sup", first}});
  }

  // Far from the walls of a large box G approaches -|x - y| / (8 pi).
  const VoxelDomain box = box_domain(4.0, 128);
  std::vector<PointPair> pairs;
  for (int i = -1; i <= 1; ++i) {
    for (int j = -1; j <= 1; ++j) {
      for (int k = -1; k <= 1; ++k) {
        if (i || j || k) pairs.push_back({{0.25 * i, 0.25 * j, 0.25 * k}, {0, 0, 0}});
      }
    }
  }
  const GradientSups fs = mixed_gradient_sup(box, pairs, {1e-8, 0});
  const double ref = free_space_mixed_scale();
  c.le("free_space_rel_err", std::abs(fs.mixed / ref - 1.0), 0.15);
  r.data = {{"domains", doms},
            {"free_space", {{"box_half_width", 4.0}, {"n", 128}, {"mixed_sup", fs.mixed},
                            {"reference", ref}, {"values", fs.mixed_values}}}};
}

// ---------------------------------------------------------------------------

void punctured_suite(SuiteResult& r, const VerifyOptions&) {
  Checks c(r);
  json reps = json::array();
  for (int n : {48, 64}) {
    const PuncturedBallReport p = punctured_ball_demo(n);
    const std::string tag = "n" + std::to_string(n);
    c.le(tag + "_sup_grad_deviation", std::abs(p.sup_grad_sampled - 1.0), 0.05);
    c.ge(tag + "_angle_deg", p.angle_deg, 85.0);
    reps.push_back({{"n", n},
                    {"h", p.h},
                    {"f_max_inner", p.f_max_inner},
                    {"boundary_max", p.boundary_max},
                    {"solution_error", p.solution_error},
                    {"sup_grad_sampled", p.sup_grad_sampled},
                    {"sup_grad_solved", p.sup_grad_solved},
                    {"grad_x_axis", p.grad_x_axis},
                    {"grad_z_axis", p.grad_z_axis},
                    {"angle_deg", p.angle_deg},
                    {"cg", to_json(p.stats)}});
  }
  r.data = {{"reports", reps}};
}

// ---------------------------------------------------------------------------

void cusp_suite(SuiteResult& r, const VerifyOptions&) {
  Checks c(r);
  struct Case {
    std::string name;
    CuspProfile h;
    VerdictKind expect;
  };
  const std::vector<Case> cases{
      {"sqrt", CuspProfile::power(1.0, 0.5), VerdictKind::AnalyticConvergent},
      {"constant_0.2", CuspProfile::power(0.2, 0.0), VerdictKind::AnalyticDivergent},
      {"inverse_log_0.5", CuspProfile::inverse_log(0.5), VerdictKind::AnalyticDivergent},
  };
  json verdicts = json::array();
  for (const auto& cs : cases) {
    const RegularityVerdict v = cusp_criterion(cs.h);
    const RegularityVerdict numeric = verdict(v.partial_sums);
    const bool bounded = numeric.model && *numeric.model == TrendModel::Bounded;
    c.truth(cs.name + "_verdict", v.kind == cs.expect);
    c.truth(cs.name + "_integral_test_agrees", bounded == (cs.expect == VerdictKind::AnalyticConvergent));
    verdicts.push_back({{"profile", cs.name}, {"verdict", to_json(v)}, {"integral_trend", to_json(numeric)}});
  }

  // Constant apertures: Cap(layer) s / theta0^2 should not depend on theta0.
  const double s = 0.25, a = 2.0;
  std::vector<double> ratios, caps;
  bool bracketed = true;
  for (double th : {0.1, 0.2, 0.4}) {
    const CuspProfile h = CuspProfile::power(th, 0.0, 1.0);
    const CapInf ci = cusp_layer_capacity(h, s, a, 64);
    const LayerBounds lb = cusp_layer_bounds(h, s, a);
    bracketed = bracketed && ci.value >= lb.lower && ci.value <= lb.upper;
    caps.push_back(ci.value);
    ratios.push_back(ci.value * s / (th * th));
  }
  const double spread = *std::max_element(ratios.begin(), ratios.end()) /
                        *std::min_element(ratios.begin(), ratios.end());
  c.le("aperture_ratio_spread", spread, 2.0);
  c.truth("layer_bounds_bracket", bracketed);
  r.data = {{"verdicts", verdicts},
            {"apertures", {0.1, 0.2, 0.4}},
            {"layer_capacities", caps},
            {"capacity_over_h2_per_s", ratios},
            {"s", s},
            {"a", a}};
}

// ---------------------------------------------------------------------------

void fourpoint_suite(SuiteResult& r, const VerifyOptions&) {
  Checks c(r);
  double lmin_on = 0.0;
  int holds = 0, total = 0;
  double worst = INFINITY;
  for (double alpha : {0.3, 0.7, kPi / 4, 1.2}) {
    const Eigen::Matrix4d m = four_point_matrix(alpha, alpha);
    const Eigen::Matrix4d mm = m * m.transpose();
    lmin_on = std::max(lmin_on, std::abs(Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d>(mm).eigenvalues()(0)));
    for (int i = 0; i < 50; ++i) {
      const double beta = alpha / 2 + 0.01 * alpha + 0.98 * alpha * i / 49.0;
      const FourPointBound b = four_point_lower_bound_check(alpha, beta);
      holds += b.holds;
      ++total;
      if (b.bound > 0) worst = std::min(worst, b.lambda_min / b.bound);
    }
  }
  c.le("lambda_min_on_cone", lmin_on, 1e-12);
  c.ge("lower_bound_holds_fraction", double(holds) / total, 1.0);

  const double eps = 0.05;
  const int kmax = 40;
  const InstabilityReport ir = instability_demo(kPi / 4, eps, kmax);
  double on_cone = 0.0;
  for (double v : ir.on_cone.values) on_cone = std::max(on_cone, std::abs(v));
  double lb_dev = 0.0, dominance = INFINITY;
  for (std::size_t k = 0; k < ir.lower_bound_sums.size(); ++k) {
    lb_dev = std::max(lb_dev, std::abs(ir.lower_bound_sums[k] - (k + 1) * eps * eps));
    dominance = std::min(dominance, ir.perturbed_sums[k] / ir.lower_bound_sums[k]);
  }
  double rebinned = 0.0;
  for (double v : ir.rebinned_caps) rebinned = std::max(rebinned, std::abs(v));
  const CgOptions solver_default;
  c.le("on_cone_necessity_sum_max", on_cone, 1e-10);
  c.le("lower_bound_series_linear_dev", lb_dev, 1e-12);
  c.le("lower_bound_final_error", std::abs(ir.lower_bound_sums.back() - kmax * eps * eps), 1e-12);
  c.ge("perturbed_over_lower_bound", dominance, 1.0);
  c.truth("perturbed_trend_linear", ir.perturbed_verdict.model == TrendModel::Linear);
  c.le("rebinned_layer_cap_max", rebinned, solver_default.tol);
  r.data = {{"lambda_ratio_min", worst},
            {"alpha", kPi / 4},
            {"epsilon", eps},
            {"k_max", kmax},
            {"on_cone", ir.on_cone.values},
            {"perturbed_sums", ir.perturbed_sums},
            {"lower_bound_sums", ir.lower_bound_sums},
            {"on_cone_verdict", to_json(ir.on_cone_verdict)},
            {"perturbed_verdict", to_json(ir.perturbed_verdict)},
            {"rebinned_caps_max", rebinned}};
}

// ---------------------------------------------------------------------------

void decay_suite(SuiteResult& r, const VerifyOptions&) {
  Checks c(r);
  const DecayReport every = decay_experiment(ObstaclePattern::Every);
  const DecayReport alt = decay_experiment(ObstaclePattern::Alternate);
  const DecayReport none = decay_experiment(ObstaclePattern::None);
  c.lt("full_family_slope", every.slope, 0.0);
  c.ge("full_family_r2", every.r2, 0.8);
  c.le("baseline_slope_abs", std::abs(none.slope_per_layer), 0.05);
  r.data = {{"every", to_json(every)}, {"alternate", to_json(alt)}, {"none", to_json(none)}};
}

using SuiteFn = void (*)(SuiteResult&, const VerifyOptions&);

const std::map<std::string, SuiteFn>& registry() {
  static const std::map<std::string, SuiteFn> m{
      {"kernel", kernel_suite},       {"identity", identity_suite}, {"capacity", capacity_suite},
      {"spectral", spectral_suite},   {"green", green_suite},       {"punctured", punctured_suite},
      {"cusp", cusp_suite},           {"fourpoint", fourpoint_suite}, {"decay", decay_suite},
  };
  return m;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"kernel", "identity", "capacity", "spectral", "green",
                                              "punctured", "cusp", "fourpoint", "decay"};
  return names;
}

SuiteResult run_suite(const std::string& name, const VerifyOptions& opts) {
  const auto it = registry().find(name);
  if (it == registry().end()) throw std::invalid_argument("unknown suite '" + name + "'");
  SuiteResult r;
  r.suite = name;
  const auto t0 = std::chrono::steady_clock::now();
  it->second(r, opts);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace bicap
