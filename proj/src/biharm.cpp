#include "bicap/biharm.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <random>
#include <stdexcept>

#include "bicap/axisym.hpp"
#include "bicap/parallel.hpp"

namespace bicap {

namespace {

double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

VoxelDomain make_domain(double half_width, int n, std::string name,
                        std::function<double(const Vec3&)> depth) {
  if (n < 8) throw std::invalid_argument("domain: at least 8 cells are required");
  const double h = 2.0 * half_width / n;
  VoxelDomain d;
  d.grid = VoxelGrid::centered_cube(half_width + 2.0 * h, n + 4);
  d.mask.assign(d.grid.size(), 0);
  for (std::size_t i = 0; i < d.grid.size(); ++i) d.mask[i] = depth(d.grid.node(i)) > 1e-9 * h;
  d.name = std::move(name);
  d.depth = std::move(depth);
  return d;
}

std::array<int, 3> checked_node(const VoxelDomain& d, const Vec3& x, const char* what) {
  const auto c = d.grid.nearest(x);
  const auto& dims = d.grid.dims();
  for (int a = 0; a < 3; ++a) {
    if (c[a] < 1 || c[a] > dims[a] - 2) throw std::invalid_argument(std::string(what) + ": point off the grid");
  }
  if (!d.mask[d.grid.index(c[0], c[1], c[2])]) {
    throw std::invalid_argument(std::string(what) + ": point outside the domain");
  }
  return c;
}

void require_stencil(const VoxelDomain& d, const std::array<int, 3>& c, const char* what) {
  for (int a = 0; a < 3; ++a) {
    for (int s : {-1, 1}) {
      auto e = c;
      e[a] += s;
      if (!d.mask[d.grid.index(e[0], e[1], e[2])]) {
        throw std::invalid_argument(std::string(what) + ": difference stencil leaves the domain");
      }
    }
  }
}

Vec3 central_gradient(const VoxelField& f, const std::array<int, 3>& c) {
  const VoxelGrid& g = f.grid;
  Vec3 out{};
  for (int a = 0; a < 3; ++a) {
    auto p = c, m = c;
    p[a] += 1;
    m[a] -= 1;
    out[a] = (f[g.index(p[0], p[1], p[2])] - f[g.index(m[0], m[1], m[2])]) / (2.0 * g.h());
  }
  return out;
}

bool face_connected(const VoxelGrid& g, const std::vector<std::uint8_t>& mask) {
  std::size_t start = mask.size(), total = 0;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) {
      ++total;
      if (start == mask.size()) start = i;
    }
  }
  if (total == 0) return true;
  std::vector<std::uint8_t> seen(mask.size(), 0);
  std::vector<std::size_t> stack{start};
  seen[start] = 1;
  std::size_t reached = 0;
  const auto& dims = g.dims();
  while (!stack.empty()) {
    const std::size_t id = stack.back();
    stack.pop_back();
    ++reached;
    const auto c = g.ijk(id);
    for (int a = 0; a < 3; ++a) {
      for (int s : {-1, 1}) {
        auto e = c;
        e[a] += s;
        if (e[a] < 0 || e[a] >= dims[a]) continue;
        const std::size_t j = g.index(e[0], e[1], e[2]);
        if (mask[j] && !seen[j]) {
          seen[j] = 1;
          stack.push_back(j);
        }
      }
    }
  }
  return reached == total;
}

}  // namespace

VoxelDomain punctured_ball_domain(int n) {
  return make_domain(1.0, n, "punctured_ball",
                     [](const Vec3& x) { return std::max(0.0, std::min(1.0 - norm(x), norm(x))); });
}

VoxelDomain box_domain(double half_width, int n) {
  return make_domain(half_width, n, "box", [half_width](const Vec3& x) {
    double d = half_width;
    for (double c : x) d = std::min(d, half_width - std::abs(c));
    return std::max(0.0, d);
  });
}

VoxelDomain blob_domain(std::uint64_t seed, int n) {
  std::mt19937_64 rng(seed);
  std::vector<std::pair<Vec3, double>> balls;
  for (int b = 0; b < 4; ++b) {
    Vec3 c{};
    for (double& v : c) v = -0.25 + 0.5 * unit_uniform(rng);
    balls.emplace_back(c, 0.45 + 0.25 * unit_uniform(rng));
  }
  return make_domain(1.0, n, "blob_" + std::to_string(seed), [balls](const Vec3& x) {
    double d = 0.0;
    for (const auto& [c, r] : balls) d = std::max(d, r - norm(x - c));
    return d;
  });
}

DirichletSolution solve_dirichlet(const DirichletProblem& pb) {
  const VoxelDomain& d = pb.domain;
  if (pb.rhs.size() != d.grid.size()) throw std::invalid_argument("solve_dirichlet: rhs does not match the grid");
  for (std::size_t i = 0; i < d.grid.size(); ++i) {
    if (!d.mask[i] && pb.rhs[i] != 0.0) {
      throw std::invalid_argument("solve_dirichlet: rhs must vanish outside the domain");
    }
  }
  if (!face_connected(d.grid, d.mask)) throw std::invalid_argument("solve_dirichlet: domain is not connected");
  MaskedProblem mp{d.grid, d.mask, std::vector<std::uint8_t>(d.grid.size(), 0), {}, pb.rhs.values};
  MaskedSolution s = solve_masked(mp, Energy::Biharmonic, pb.cg);
  DirichletSolution out;
  out.energy = s.energy;
  out.stats = s.stats;
  double pair = 0.0;
  for (std::size_t i = 0; i < s.u.size(); ++i) pair += pb.rhs[i] * s.u[i];
  out.pairing = std::pow(d.grid.h(), 3) * pair;
  out.u = std::move(s.u);
  return out;
}

GreenSample green_sample(const VoxelDomain& d, const Vec3& y, const CgOptions& cg) {
  const auto c = checked_node(d, y, "green_sample");
  require_stencil(d, c, "green_sample");
  VoxelField f(d.grid);
  f[d.grid.index(c[0], c[1], c[2])] = 1.0 / std::pow(d.grid.h(), 3);
  DirichletSolution s = solve_dirichlet({d, f, cg});
  return {c, std::move(s.u), s.stats};
}

GradientSups mixed_gradient_sup(const VoxelDomain& d, const std::vector<PointPair>& pairs,
                                const CgOptions& cg) {
  if (pairs.size() < 16) throw std::invalid_argument("mixed_gradient_sup: at least 16 pairs are required");
  const double h = d.grid.h();
  struct Resolved {
    std::array<int, 3> x, y;
  };
  std::vector<Resolved> nodes;
  std::map<std::array<int, 3>, int> sources;
  for (const auto& p : pairs) {
    Resolved r{checked_node(d, p.x, "mixed_gradient_sup"), checked_node(d, p.y, "mixed_gradient_sup")};
    require_stencil(d, r.x, "mixed_gradient_sup");
    require_stencil(d, r.y, "mixed_gradient_sup");
    if (norm(d.grid.node(r.x[0], r.x[1], r.x[2]) - d.grid.node(r.y[0], r.y[1], r.y[2])) < 4.0 * h - 1e-9 * h) {
      throw std::invalid_argument("mixed_gradient_sup: pair closer than 4h");
    }
    sources.emplace(r.y, static_cast<int>(sources.size()));
    nodes.push_back(r);
  }

  // Seven solves per source: the node and its six face neighbours.
  std::vector<std::array<int, 3>> centers(sources.size());
  for (const auto& [c, k] : sources) centers[k] = c;
  std::vector<VoxelField> fields(7 * centers.size());
  parallel_for(fields.size(), [&](std::size_t job) {
    auto c = centers[job / 7];
    const int m = static_cast<int>(job % 7);
    if (m > 0) c[(m - 1) / 2] += (m % 2) ? 1 : -1;
    fields[job] = green_sample(d, d.grid.node(c[0], c[1], c[2]), cg).field;
  });

  GradientSups out;
  out.solves = static_cast<int>(fields.size());
  for (const auto& r : nodes) {
    const int base = 7 * sources.at(r.y);
    const Vec3 g0 = central_gradient(fields[base], r.x);
    Eigen::Matrix3d m;
    for (int k = 0; k < 3; ++k) {
      const Vec3 gp = central_gradient(fields[base + 1 + 2 * k], r.x);
      const Vec3 gm = central_gradient(fields[base + 2 + 2 * k], r.x);
      for (int i = 0; i < 3; ++i) m(i, k) = (gp[i] - gm[i]) / (2.0 * h);
    }
    const double dist = norm(d.grid.node(r.x[0], r.x[1], r.x[2]) - d.grid.node(r.y[0], r.y[1], r.y[2]));
    out.hessians.push_back(m);
    out.mixed_values.push_back(dist * m.norm());
    out.first_values.push_back(norm(g0));
    out.mixed = std::max(out.mixed, out.mixed_values.back());
    out.first = std::max(out.first, out.first_values.back());
  }
  return out;
}

double cutoff(double r, int derivative) {
  // 1 - S((r - 1/4) / (1/4)) with S(x) = 126x^5 - 420x^6 + 540x^7 - 315x^8 + 70x^9.
  static const double coef[10] = {0, 0, 0, 0, 0, 126, -420, 540, -315, 70};
  const double x = 4.0 * (r - 0.25);
  if (x <= 0.0) return derivative == 0 ? 1.0 : 0.0;
  if (x >= 1.0) return 0.0;
  double s = 0.0;
  for (int p = derivative; p < 10; ++p) {
    double falling = 1.0;
    for (int q = 0; q < derivative; ++q) falling *= p - q;
    s += coef[p] * falling * std::pow(x, p - derivative);
  }
  s *= std::pow(4.0, derivative);
  return derivative == 0 ? 1.0 - s : -s;
}

PuncturedBallReport punctured_ball_demo(int n, const CgOptions& cg) {
  if (n < 32) throw std::invalid_argument("punctured_ball_demo: n must be at least 32");
  const VoxelDomain d = punctured_ball_domain(n);
  const VoxelGrid& g = d.grid;
  PuncturedBallReport rep;
  rep.n = n;
  rep.h = g.h();

  // (r^2 eta)'''' / r is the bilaplacian of the radial function r eta(r).
  VoxelField f(g), exact(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = norm(g.node(i));
    exact[i] = cutoff(r) * r;
    if (!d.mask[i] || r == 0.0) continue;
    f[i] = r * cutoff(r, 4) + 8.0 * cutoff(r, 3) + 12.0 * cutoff(r, 2) / r;
    if (r <= 0.125) rep.f_max_inner = std::max(rep.f_max_inner, std::abs(f[i]));
  }
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!d.mask[i]) rep.boundary_max = std::max(rep.boundary_max, std::abs(exact[i]));
  }

  const DirichletSolution s = solve_dirichlet({d, f, cg});
  rep.stats = s.stats;
  double err = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    err = std::max(err, std::abs(s.u[i] - exact[i]));
    scale = std::max(scale, std::abs(exact[i]));
  }
  rep.solution_error = err / scale;

  const auto o = g.nearest({0.0, 0.0, 0.0});
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Vec3 x = g.node(i);
    const double r = norm(x);
    if (r == 0.0 || r > 0.25) continue;
    const auto c = g.ijk(i);
    rep.sup_grad_sampled = std::max(rep.sup_grad_sampled, norm(central_gradient(exact, c)));
    rep.sup_grad_solved = std::max(rep.sup_grad_solved, norm(central_gradient(s.u, c)));
  }
  rep.grad_x_axis = central_gradient(s.u, {o[0] + 1, o[1], o[2]});
  rep.grad_z_axis = central_gradient(s.u, {o[0], o[1], o[2] + 1});
  const double cosang = dot(rep.grad_x_axis, rep.grad_z_axis) /
                        (norm(rep.grad_x_axis) * norm(rep.grad_z_axis));
  rep.angle_deg = std::acos(std::clamp(cosang, -1.0, 1.0)) * 180.0 / kPi;
  return rep;
}

std::string to_string(ObstaclePattern p) {
  switch (p) {
    case ObstaclePattern::None: return "none";
    case ObstaclePattern::Every: return "every";
    case ObstaclePattern::Alternate: return "alternate";
  }
  return "unknown";
}

namespace {

struct LineFit {
  double slope = 0.0, intercept = 0.0, r2 = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LineFit f;
  if (sxx == 0.0) {
    f.intercept = my;
    return f;
  }
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  return f;
}

bool has_obstacle(ObstaclePattern p, int j) {
  switch (p) {
    case ObstaclePattern::None: return false;
    case ObstaclePattern::Every: return true;
    case ObstaclePattern::Alternate: return j % 2 == 0;
  }
  return false;
}

}  // namespace

DecayReport decay_experiment(ObstaclePattern pattern, const DecayOptions& o) {
  if (!(o.a >= 2.0) || o.l_max < 3) throw std::invalid_argument("decay_experiment: needs a >= 2 and l_max >= 3");
  const double la = std::log(o.a);
  const double t_r = std::log(1.0 / o.R);
  auto shell_center = [&](int j) { return t_r + (2.0 * j - 1.0) * la; };
  const int j_last = o.l_max + 2;

  AxisymGrid g;
  g.t_min = 0.0;
  g.t_max = t_r + 2.0 * j_last * la + 1.0;
  g.n_t = static_cast<int>(std::lround((g.t_max - g.t_min) / o.dt)) + 1;
  g.n_theta = o.n_theta;
  AxisymProblem pb{g, std::vector<std::uint8_t>(g.size(), 0), {}};
  for (int j = 2; j <= j_last; ++j) {
    if (!has_obstacle(pattern, j)) continue;
    const double tc = shell_center(j);
    for (int i = 0; i < g.n_t; ++i) {
      if (std::abs(g.t(i) - tc) > 0.5 * o.shell_thickness) continue;
      for (int k = 0; k < g.n_theta; ++k) {
        if (g.theta(k) >= o.opening) pb.obstacle[g.index(i, k)] = 1;
      }
    }
  }
  // Bump on 0.075 < t < 0.575, i.e. roughly 0.56 < |x| < 0.93.
  pb.load = [](double t, double theta) {
    const double x = (t - 0.325) / 0.25;
    if (std::abs(x) >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - x * x)) * (1.0 + 0.5 * std::cos(theta));
  };
  const AxisymSolution sol = solve_axisym(pb);
  const std::vector<double> q = gradient_ratio(sol);

  // Capacity sums from the same shells at unit scale in [1, a^2].
  const double ratio = o.a * o.a;
  LayerOptions lo;
  lo.j_min = 2;
  lo.resolution = o.capacity_resolution;
  lo.cg = o.cg;
  const double half = 0.5 * o.shell_thickness;
  const LayerSeries series = layer_capacities(
      [&](int j) -> std::optional<CompactumSpec> {
        if (!has_obstacle(pattern, j)) return std::nullopt;
        return CompactumSpec(ShellShape{o.a * std::exp(-half), o.a * std::exp(half), o.opening});
      },
      ratio, o.l_max, lo);

  DecayReport rep;
  rep.pattern = pattern;
  rep.no_decay_baseline = pattern == ObstaclePattern::None;
  std::vector<double> lx;
  const double t_hi = g.t_max - 1.0;
  for (int l = 2; l <= o.l_max; ++l) {
    const double t_lo = t_r + 2.0 * l * la;
    double sup = 0.0;
    for (int i = 1; i <= g.n_t - 2; ++i) {
      if (g.t(i) < t_lo || g.t(i) > t_hi) continue;
      for (int k = 0; k < g.n_theta; ++k) sup = std::max(sup, q[g.index(i, k)]);
    }
    rep.l.push_back(l);
    lx.push_back(l);
    rep.capacity_sum.push_back(decay_factor(series, l));
    rep.log_sup.push_back(std::log(sup));
  }
  const LineFit by_cap = fit_line(rep.capacity_sum, rep.log_sup);
  rep.slope = by_cap.slope;
  rep.intercept = by_cap.intercept;
  rep.r2 = by_cap.r2;
  rep.slope_per_layer = fit_line(lx, rep.log_sup).slope;
  return rep;
}

RieszReport riesz_estimate_check(const std::function<Vec3(const Vec3&)>& f,
                                 const std::function<double(const Vec3&)>& hfn,
                                 const VoxelDomain& d, const std::vector<Vec3>& points,
                                 const CgOptions& cg) {
  const VoxelGrid& g = d.grid;
  const double h = g.h();
  const double h3 = h * h * h;
  const auto& dims = g.dims();
  VoxelField rhs(g), fmag(g), habs(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!d.mask[i]) continue;
    const Vec3 x = g.node(i);
    fmag[i] = norm(f(x));
    habs[i] = std::abs(hfn(x));
    const auto c = g.ijk(i);
    double div = 0.0;
    for (int a = 0; a < 3; ++a) {
      if (c[a] == 0 || c[a] == dims[a] - 1) continue;
      Vec3 e{};
      e[a] = h;
      div += (f(x + e)[a] - f(x - e)[a]) / (2.0 * h);
    }
    rhs[i] = div + hfn(x);
  }
  const DirichletSolution s = solve_dirichlet({d, rhs, cg});

  double h_mass = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) h_mass += h3 * habs[i];
  // Integral of 1/|y| over a cube of side h centred at the origin.
  const double self_cell = 2.3800772 * h * h;

  RieszReport rep;
  for (const Vec3& p : points) {
    const auto c = checked_node(d, p, "riesz_estimate_check");
    require_stencil(d, c, "riesz_estimate_check");
    const Vec3 x = g.node(c[0], c[1], c[2]);
    const std::size_t xi = g.index(c[0], c[1], c[2]);
    double pot = fmag[xi] * self_cell;
    for (std::size_t j = 0; j < g.size(); ++j) {
      if (j == xi || fmag[j] == 0.0) continue;
      pot += h3 * fmag[j] / norm(g.node(j) - x);
    }
    RieszSample smp{x, norm(central_gradient(s.u, c)), pot + h_mass};
    if (smp.rhs > 0.0) rep.sup_ratio = std::max(rep.sup_ratio, smp.lhs / smp.rhs);
    rep.samples.push_back(smp);
  }
  return rep;
}

namespace {

template <class T>
void put_le(std::ostream& os, T v) {
  unsigned char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  os.write(reinterpret_cast<const char*>(b), sizeof(T));
}

template <class T>
T get_le(std::istream& is) {
  unsigned char b[sizeof(T)];
  is.read(reinterpret_cast<char*>(b), sizeof(T));
  if (!is) throw std::runtime_error("read_field: truncated file");
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  T v;
  std::memcpy(&v, b, sizeof(T));
  return v;
}

}  // namespace

void write_field(const std::string& path, const VoxelField& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("write_field: cannot open " + path);
  for (int d : f.grid.dims()) put_le<std::int64_t>(os, d);
  put_le<double>(os, f.grid.h());
  for (double c : f.grid.origin()) put_le<double>(os, c);
  for (double v : f.values) put_le<double>(os, v);
  if (!os) throw std::runtime_error("write_field: write failed for " + path);
}

VoxelField read_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("read_field: cannot open " + path);
  std::array<int, 3> dims{};
  for (int& d : dims) {
    const auto v = get_le<std::int64_t>(is);
    if (v < 1 || v > (1 << 20)) throw std::runtime_error("read_field: bad dimensions");
    d = static_cast<int>(v);
  }
  const double h = get_le<double>(is);
  Vec3 origin{};
  for (double& c : origin) c = get_le<double>(is);
  VoxelField f(VoxelGrid(origin, h, dims));
  for (double& v : f.values) v = get_le<double>(is);
  return f;
}

}  // namespace bicap
