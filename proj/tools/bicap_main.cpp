#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <random>
#include <string>

#include "bicap/biharm.hpp"
#include "bicap/capacity.hpp"
#include "bicap/models.hpp"
#include "bicap/report.hpp"
#include "bicap/scene.hpp"
#include "bicap/verify.hpp"
#include "bicap/wiener.hpp"

using namespace bicap;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitVerify = 2;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Flags {
  std::string scene_path;
  std::optional<double> a;
  std::optional<int> jmax;
  std::optional<int> grid;
  std::optional<double> tol;
  std::uint64_t seed = 1;
  std::string json_path;
  std::string csv_path;
  bool no_timings = false;
  // subcommand options
  std::string suite = "all";
  std::string model;
  std::optional<double> alpha;
  std::optional<double> beta;
};

class Timer {
 public:
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - t_).count();
    t_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point t_ = std::chrono::steady_clock::now();
};

Scene load_scene(const Flags& f, bool required) {
  if (f.scene_path.empty()) {
    if (required) throw InputError("this subcommand needs --scene");
    return Scene::parse("", "<none>");
  }
  return Scene::load(f.scene_path);
}

CgOptions cg_options(const Flags& f, const Scene& s, double fallback = 1e-8) {
  const double tol = f.tol ? *f.tol : s.number("solver.tol", fallback);
  if (!(tol > 0.0 && tol < 1.0)) throw SceneError(f.tol ? "--tol" : "solver.tol", "must lie in (0, 1)");
  return {tol, s.integer("solver.max_iter", 0)};
}

int grid_size(const Flags& f, const Scene& s, const std::string& key, int fallback) {
  const int n = f.grid ? *f.grid : s.integer(key, fallback);
  if (n < 8 || n > 1024) throw SceneError(f.grid ? "--grid" : key, "must lie in [8, 1024]");
  return n;
}

Report make_report(const std::string& task, const Flags& f, const Scene& s) {
  Report r;
  r.task = task;
  r.inputs = {{"scene_hash", s.hash()}, {"seed", f.seed}};
  if (f.a) r.inputs["a"] = *f.a;
  if (f.jmax) r.inputs["jmax"] = *f.jmax;
  if (f.grid) r.inputs["grid"] = *f.grid;
  if (f.tol) r.inputs["tol"] = *f.tol;
  json scene = json::object();
  for (const auto& [k, v] : s.values()) {
    std::visit([&](const auto& x) { scene[k] = x; }, v);
  }
  r.inputs["scene"] = scene;
  return r;
}

void emit(const Report& r, const Flags& f, const CsvTable* table, bool print_json = true) {
  const json j = r.to_json(!f.no_timings);
  if (!f.json_path.empty()) {
    write_json(j, f.json_path);
  } else if (print_json) {
    std::cout << j.dump(2) << '\n';
  }
  if (!f.csv_path.empty()) {
    if (!table) throw InputError("this report has no series for --csv");
    write_csv(*table, f.csv_path);
  }
}

// ---------------------------------------------------------------------------

int cmd_capacity(const Flags& f) {
  Timer timer;
  const Scene s = load_scene(f, true);
  const CompactumSpec k = compactum_from_scene(s);
  const int res = grid_size(f, s, "solver.resolution", 48);
  const CgOptions cg = cg_options(f, s);
  CapacityProblem pb{k, capacity_domain_from_scene(s, k), res, cg,
                     s.text("solver.neighbourhood", "dilated") == "core" ? Neighbourhood::Core
                                                                         : Neighbourhood::Dilated};
  Report r = make_report("capacity", f, s);
  r.timings["setup"] = timer.lap();
  const GramMatrix g = cap_gram(pb);
  const CapInf ci = cap_inf(g.g);
  r.timings["gram"] = timer.lap();
  r.results = {{"compactum", k.kind()}, {"gram", to_json(g)}, {"cap", ci.value}, {"b_min", to_json(ci.b_min)}};
  if (s.has("task.profile")) {
    const auto b = s.numbers("task.profile");
    if (b.size() != 4) throw SceneError("task.profile", "expected 4 numbers");
    const PiProfile p = PiProfile{{b[0], b[1], b[2], b[3]}}.normalized();
    const CapacityResult c = cap_p(pb, p);
    r.results["cap_p"] = {{"profile", to_json(p)}, {"value", c.value}, {"cg", to_json(c.stats)}};
    r.timings["cap_p"] = timer.lap();
  }
  if (s.flag("task.harmonic", false)) {
    const CapacityResult h = harmonic_cap(pb);
    r.results["harmonic_cap"] = {{"value", h.value}, {"cg", to_json(h.stats)}};
    r.timings["harmonic"] = timer.lap();
  }
  r.provenance = {{"resolution", res}, {"tolerance", cg.tol}};
  CsvTable t{{"e", "g0", "g1", "g2", "g3"}, {}};
  for (int i = 0; i < 4; ++i) t.rows.push_back({double(i), g.g(i, 0), g.g(i, 1), g.g(i, 2), g.g(i, 3)});
  emit(r, f, &t);
  return kExitOk;
}

int cmd_wiener(const Flags& f) {
  Timer timer;
  const Scene s = load_scene(f, true);
  const double a = f.a ? *f.a : s.number("task.a", 2.0);
  if (!(a >= 2.0)) throw SceneError(f.a ? "--a" : "task.a", "the layer ratio must be at least 2");
  const int jmax = f.jmax ? *f.jmax : s.integer("task.jmax", 12);
  const SceneLayers layers = layers_from_scene(s, a);
  if (jmax < layers.j_min) throw SceneError(f.jmax ? "--jmax" : "task.jmax", "below the first layer");
  LayerOptions lo;
  lo.j_min = layers.j_min;
  lo.resolution = grid_size(f, s, "solver.resolution", 32);
  lo.cg = cg_options(f, s);
  Report r = make_report("wiener", f, s);
  const LayerSeries series = layer_capacities(layers.family, a, jmax, lo);
  r.timings["layers"] = timer.lap();
  const auto sums = sufficiency_sum(series);
  r.results = {{"family", layers.description}, {"series", to_json(series)}, {"sufficiency_sum", sums}};
  if (sums.size() >= 8) {
    r.results["verdict"] = to_json(verdict(sums));
  } else {
    r.results["verdict"] = nullptr;
    r.results["note"] = "at least 8 layers are needed for a trend verdict";
  }
  r.provenance = {{"resolution", lo.resolution}, {"tolerance", lo.cg.tol}};
  const CsvTable t = series_table(series);
  emit(r, f, &t);
  return kExitOk;
}

std::vector<Vec3> cone_points(const std::array<double, 4>& b, int count, std::uint64_t seed) {
  const Vec3 bv{b[1], b[2], b[3]};
  const double nb = norm(bv);
  if (!(nb > 0.0) || std::abs(b[0]) > nb) throw InputError("the cone b0|x| + b.x = 0 is empty");
  const Vec3 n = (1.0 / nb) * bv;
  const Vec3 t0 = std::abs(n[0]) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
  Vec3 e1 = t0 - dot(t0, n) * n;
  e1 = (1.0 / norm(e1)) * e1;
  const Vec3 e2{n[1] * e1[2] - n[2] * e1[1], n[2] * e1[0] - n[0] * e1[2], n[0] * e1[1] - n[1] * e1[0]};
  const double c = -b[0] / nb, sn = std::sqrt(1.0 - c * c);
  std::mt19937_64 rng(seed);
  auto uni = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  std::vector<Vec3> pts;
  for (int i = 0; i < count; ++i) {
    const double phi = 2.0 * kPi * uni(), r = 1.0 + uni();
    pts.push_back(r * (c * n + sn * std::cos(phi) * e1 + sn * std::sin(phi) * e2));
  }
  return pts;
}

int cmd_model(const Flags& f) {
  Timer timer;
  const Scene s = load_scene(f, f.model == "cusp");
  Report r = make_report("model." + f.model, f, s);
  CsvTable t;
  if (f.model == "cusp") {
    const CuspProfile h = cusp_from_scene(s);
    const RegularityVerdict v = cusp_criterion(h);
    r.results = {{"verdict", to_json(v)}};
    if (s.has("task.s")) {
      const double sl = s.number("task.s");
      const double a = f.a ? *f.a : s.number("task.a", 2.0);
      try {
        const LayerBounds lb = cusp_layer_bounds(h, sl, a);
        const CapInf ci = cusp_layer_capacity(h, sl, a, grid_size(f, s, "solver.resolution", 64), cg_options(f, s));
        r.results["layer"] = {{"s", sl}, {"a", a}, {"cap", ci.value}, {"lower", lb.lower}, {"upper", lb.upper}};
      } catch (const std::invalid_argument& e) {
        throw SceneError("task.s", e.what());
      }
    }
    t.header = {"k", "partial"};
    for (std::size_t i = 0; i < v.partial_sums.size(); ++i) t.rows.push_back({double(i + 1), v.partial_sums[i]});
  } else if (f.model == "cone") {
    const auto bv = s.numbers("geometry.b", std::vector<double>{0, 0, 0, 1});
    if (bv.size() != 4) throw SceneError("geometry.b", "expected 4 numbers");
    const std::array<double, 4> b{bv[0], bv[1], bv[2], bv[3]};
    const int count = s.integer("task.points", 6);
    if (count < 1) throw SceneError("task.points", "must be positive");
    std::vector<int> res;
    if (f.grid) {
      res = {*f.grid};
    } else {
      for (double v : s.numbers("task.resolutions", std::vector<double>{16, 24, 32})) res.push_back(int(v));
    }
    const auto pts = cone_points(b, count, f.seed);
    const auto caps = cone_null_capacity(b, pts, res, cg_options(f, s));
    r.results = {{"b", bv}, {"points", pts}, {"resolutions", res}, {"capacities", caps}};
    t.header = {"resolution", "capacity"};
    for (std::size_t i = 0; i < res.size(); ++i) t.rows.push_back({double(res[i]), caps[i]});
  } else if (f.model == "fourpoint") {
    const double alpha = f.alpha.value_or(kPi / 4), beta = f.beta.value_or(alpha);
    Eigen::Matrix4d m;
    try {
      m = four_point_matrix(alpha, beta);
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what());
    }
    const Eigen::Matrix4d mm = m * m.transpose();
    const double lmin = Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d>(mm).eigenvalues()(0);
    const FourPointBound fb = four_point_lower_bound_check(alpha, beta);
    r.results = {{"alpha", alpha}, {"beta", beta}, {"matrix", to_json(m)}, {"lambda_min", lmin},
                 {"lower_bound", fb.bound}, {"bound_holds", fb.holds}, {"c0", four_point_c0(alpha)}};
    t.header = {"row", "c0", "c1", "c2", "c3"};
    for (int i = 0; i < 4; ++i) t.rows.push_back({double(i), m(i, 0), m(i, 1), m(i, 2), m(i, 3)});
  } else if (f.model == "instability") {
    const double alpha = f.alpha.value_or(kPi / 4), beta = f.beta.value_or(alpha + 0.05);
    const int kmax = f.jmax.value_or(40);
    InstabilityOptions io;
    if (f.a) io.a = *f.a;
    io.resolution = grid_size(f, s, "solver.resolution", 64);
    io.cg = cg_options(f, s);
    InstabilityReport ir;
    try {
      ir = instability_demo(alpha, beta - alpha, kmax, io);
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what());
    }
    r.results = {{"alpha", alpha}, {"epsilon", beta - alpha}, {"k_max", kmax},
                 {"on_cone", ir.on_cone.values}, {"perturbed", to_json(ir.perturbed)},
                 {"perturbed_sums", ir.perturbed_sums}, {"lower_bound_sums", ir.lower_bound_sums},
                 {"on_cone_verdict", to_json(ir.on_cone_verdict)},
                 {"perturbed_verdict", to_json(ir.perturbed_verdict)}, {"rebinned_caps", ir.rebinned_caps}};
    t.header = {"k", "on_cone", "perturbed", "lower_bound"};
    for (std::size_t i = 0; i < ir.perturbed_sums.size(); ++i) {
      t.rows.push_back({double(i + 1), ir.on_cone.values[i], ir.perturbed_sums[i], ir.lower_bound_sums[i]});
    }
  } else {
    throw InputError("unknown model '" + f.model + "' (cusp, cone, fourpoint, instability)");
  }
  r.timings["model"] = timer.lap();
  emit(r, f, &t);
  return kExitOk;
}

int cmd_solve(const Flags& f) {
  Timer timer;
  const Scene s = load_scene(f, true);
  const int n = grid_size(f, s, "solver.grid", 48);
  const VoxelDomain d = voxel_domain_from_scene(s, n, f.seed);
  const VoxelField rhs = load_from_scene(s, d);
  const CgOptions cg = cg_options(f, s, 1e-10);
  Report r = make_report("solve", f, s);
  const DirichletSolution sol = solve_dirichlet({d, rhs, cg});
  r.timings["solve"] = timer.lap();
  double umax = 0.0;
  for (double v : sol.u.values) umax = std::max(umax, std::abs(v));
  r.results = {{"domain", d.name}, {"energy", sol.energy}, {"pairing", sol.pairing},
               {"max_abs_u", umax}, {"cg", to_json(sol.stats)}};
  if (s.has("output.field")) {
    const std::string path = s.text("output.field", std::nullopt);
    try {
      write_field(path, sol.u);
    } catch (const std::runtime_error& e) {
      throw SceneError("output.field", e.what());
    }
    r.results["field"] = path;
  }
  r.provenance = {{"n", n}, {"h", d.grid.h()}, {"tolerance", cg.tol}};
  CsvTable t{{"x", "u"}, {}};
  const auto c = d.grid.nearest({0, 0, 0});
  for (int i = 0; i < d.grid.dims()[0]; ++i) {
    t.rows.push_back({d.grid.node(i, c[1], c[2])[0], sol.u[d.grid.index(i, c[1], c[2])]});
  }
  emit(r, f, &t);
  return kExitOk;
}

int cmd_green(const Flags& f) {
  Timer timer;
  const Scene s = load_scene(f, true);
  s.expect_keys("green", {"sources", "spacing", "min_depth", "extent"});
  const int n = grid_size(f, s, "solver.grid", 48);
  const VoxelDomain d = voxel_domain_from_scene(s, n, f.seed);
  const double spacing = s.number("green.spacing", 0.25);
  const double min_depth = s.number("green.min_depth", 0.2);
  const double extent = s.number("green.extent", 0.75);
  if (!(spacing > 0.0)) throw SceneError("green.spacing", "must be positive");
  const auto src = s.numbers("green.sources", std::vector<double>{0.25, 0, 0});
  if (src.empty() || src.size() % 3) throw SceneError("green.sources", "expected 3 numbers per source");
  const double min_dist = std::max(4.0 * d.grid.h(), spacing) - 1e-9;
  std::vector<PointPair> pairs;
  const int m = static_cast<int>(std::floor(extent / spacing + 1e-9));
  for (std::size_t q = 0; q < src.size(); q += 3) {
    const Vec3 y{src[q], src[q + 1], src[q + 2]};
    if (d.depth(y) < min_depth) throw SceneError("green.sources", "source too close to the boundary");
    for (int i = -m; i <= m; ++i) {
      for (int j = -m; j <= m; ++j) {
        for (int k = -m; k <= m; ++k) {
          const Vec3 x{spacing * i, spacing * j, spacing * k};
          if (d.depth(x) >= min_depth && norm(x - y) >= min_dist) pairs.push_back({x, y});
        }
      }
    }
  }
  GradientSups g;
  try {
    g = mixed_gradient_sup(d, pairs, cg_options(f, s, 1e-8));
  } catch (const std::invalid_argument& e) {
    throw SceneError("green.sources", e.what());
  }
  Report r = make_report("green", f, s);
  r.timings["green"] = timer.lap();
  r.results = {{"domain", d.name}, {"pairs", pairs.size()}, {"solves", g.solves},
               {"mixed_sup", g.mixed}, {"first_sup", g.first},
               {"free_space_mixed", free_space_mixed_scale()}};
  r.provenance = {{"n", n}, {"h", d.grid.h()}};
  CsvTable t{{"x1", "x2", "x3", "y1", "y2", "y3", "mixed", "first"}, {}};
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& p = pairs[i];
    t.rows.push_back({p.x[0], p.x[1], p.x[2], p.y[0], p.y[1], p.y[2], g.mixed_values[i], g.first_values[i]});
  }
  emit(r, f, &t);
  return kExitOk;
}

int cmd_verify(const Flags& f) {
  std::vector<std::string> suites;
  if (f.suite == "all") {
    suites = suite_names();
  } else {
    for (const auto& n : suite_names()) {
      if (n == f.suite) suites.push_back(n);
    }
    if (suites.empty()) throw InputError("unknown suite '" + f.suite + "'");
  }
  const Scene s = load_scene(f, false);
  Report r = make_report("verify", f, s);
  json out = json::array();
  CsvTable t{{"suite", "check", "value", "limit", "pass"}, {}};
  bool ok = true;
  for (const auto& name : suites) {
    const SuiteResult sr = run_suite(name, {f.seed});
    ok = ok && sr.passed();
    r.timings["suite." + name] = sr.seconds;
    out.push_back(to_json(sr));
    // Console timings are not part of the report.
    std::printf("%-10s %s  (%.2f s)\n", name.c_str(), sr.passed() ? "PASS" : "FAIL", sr.seconds);
    for (const auto& c : sr.checks) {
      if (!c.pass) std::printf("    failed: %s = %.6g (%s %.6g)\n", c.name.c_str(), c.value, c.relation.c_str(), c.limit);
    }
    std::fflush(stdout);
    const double si = static_cast<double>(&name - suites.data());
    for (std::size_t i = 0; i < sr.checks.size(); ++i) {
      t.rows.push_back({si, double(i), sr.checks[i].value, sr.checks[i].limit, sr.checks[i].pass ? 1.0 : 0.0});
    }
  }
  r.results = {{"suites", out}, {"passed", ok}};
  emit(r, f, &t, false);
  return ok ? kExitOk : kExitVerify;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Biharmonic capacities, Wiener-type series and model checks"};
  app.require_subcommand(1);
  app.fallthrough();
  Flags f;
  double a = 0, tol = 0;
  int jmax = 0, grid = 0;
  app.add_option("--scene", f.scene_path, "Scene file");
  auto* oa = app.add_option("--a", a, "Layer ratio");
  auto* oj = app.add_option("--jmax", jmax, "Last layer index");
  auto* og = app.add_option("--grid", grid, "Grid resolution");
  auto* ot = app.add_option("--tol", tol, "CG relative tolerance");
  app.add_option("--seed", f.seed, "Seed for sampled points and profiles");
  app.add_option("--json", f.json_path, "Write the JSON report here");
  app.add_option("--csv", f.csv_path, "Write the plot table here");
  app.add_flag("--no-timings", f.no_timings, "Leave timings out of the report");

  auto* cap = app.add_subcommand("capacity", "Gram matrix and Cap of a compactum");
  auto* wie = app.add_subcommand("wiener", "Layer series and regularity verdict");
  auto* mod = app.add_subcommand("model", "Model geometries");
  mod->add_option("kind", f.model, "cusp, cone, fourpoint or instability")->required();
  double alpha = 0, beta = 0;
  auto* oal = mod->add_option("--alpha", alpha, "Colatitude of A1..A3");
  auto* obe = mod->add_option("--beta", beta, "Colatitude of A4");
  auto* sol = app.add_subcommand("solve", "Clamped Dirichlet problem");
  auto* grn = app.add_subcommand("green", "Green function gradient sups");
  auto* ver = app.add_subcommand("verify", "Verification suites");
  ver->add_option("--suite", f.suite, "Suite name or all");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }
  if (*oa) f.a = a;
  if (*oj) f.jmax = jmax;
  if (*og) f.grid = grid;
  if (*ot) f.tol = tol;
  if (*oal) f.alpha = alpha;
  if (*obe) f.beta = beta;

  try {
    if (*cap) return cmd_capacity(f);
    if (*wie) return cmd_wiener(f);
    if (*mod) return cmd_model(f);
    if (*sol) return cmd_solve(f);
    if (*grn) return cmd_green(f);
    if (*ver) return cmd_verify(f);
  } catch (const SceneError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}
