#include "bicap/capacity.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace bicap {

namespace {

int half_cells(double half_width, double h) {
  return static_cast<int>(std::ceil(half_width / h - 1e-9)) + 2;
}

std::size_t origin_node(const VoxelGrid& g) {
  const auto c = g.nearest({0.0, 0.0, 0.0});
  return g.index(c[0], c[1], c[2]);
}

}  // namespace

VoxelGrid domain_grid(const CapacityDomain& domain, int resolution) {
  if (resolution < 4) throw std::invalid_argument("capacity: resolution must be at least 4");
  if (const auto* a = std::get_if<AnnulusDomain>(&domain)) {
    const double h = 2.0 * a->r_outer / resolution;
    return padded_cube(a->r_outer, h, 2);
  }
  if (const auto* b = std::get_if<BoxDomain>(&domain)) {
    const double h = 2.0 * b->half_width / resolution;
    const int half = half_cells(b->half_width, h);
    return VoxelGrid(b->center - (half * h) * Vec3{1.0, 1.0, 1.0}, h,
                     {2 * half + 1, 2 * half + 1, 2 * half + 1});
  }
  const auto& s = std::get<SlabDomain>(domain);
  double extent = 0.0;
  for (int a = 0; a < 3; ++a) extent = std::max(extent, s.hi[a] - s.lo[a]);
  const double h = extent / resolution;
  Vec3 origin{};
  std::array<int, 3> dims{};
  for (int a = 0; a < 3; ++a) {
    const int lo = static_cast<int>(std::floor(s.lo[a] / h + 1e-9)) - 2;
    const int hi = static_cast<int>(std::ceil(s.hi[a] / h - 1e-9)) + 2;
    origin[a] = lo * h;
    dims[a] = hi - lo + 1;
  }
  return VoxelGrid(origin, h, dims);
}

std::vector<std::uint8_t> domain_mask(const CapacityDomain& domain, const VoxelGrid& grid) {
  std::vector<std::uint8_t> m(grid.size(), 0);
  const double eps = 1e-9 * grid.h();
  bool puncture = false;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Vec3 x = grid.node(i);
    if (const auto* a = std::get_if<AnnulusDomain>(&domain)) {
      const double r = norm(x);
      m[i] = r > a->r_inner + eps && r < a->r_outer - eps;
    } else if (const auto* b = std::get_if<BoxDomain>(&domain)) {
      bool in = true;
      for (int k = 0; k < 3; ++k) in = in && std::abs(x[k] - b->center[k]) < b->half_width - eps;
      m[i] = in;
      puncture = b->puncture_origin;
    } else {
      const auto& s = std::get<SlabDomain>(domain);
      bool in = true;
      for (int k = 0; k < 3; ++k) in = in && x[k] > s.lo[k] + eps && x[k] < s.hi[k] - eps;
      m[i] = in;
      puncture = s.puncture_origin;
    }
  }
  if (puncture) {
    const std::size_t o = origin_node(grid);
    if (norm(grid.node(o)) < 0.5 * grid.h()) m[o] = 0;
  }
  return m;
}

CapacityProblem CapacityProblem::around(const CompactumSpec& k, int resolution) {
  const auto [lo, hi] = k.bounding_radii();
  if (!(lo > 0.0)) throw std::invalid_argument("capacity: compactum must stay away from the origin");
  return CapacityProblem{k, AnnulusDomain{0.5 * lo, 2.0 * hi}, resolution, {},
                         Neighbourhood::Dilated};
}

Discretization discretize(const CapacityProblem& problem) {
  Discretization d;
  d.grid = domain_grid(problem.domain, problem.resolution);
  d.domain = domain_mask(problem.domain, d.grid);
  d.fixed = problem.neighbourhood == Neighbourhood::Dilated
                ? rasterize(problem.compactum, d.grid)
                : rasterize_core(problem.compactum, d.grid);
  bool any = false;
  for (std::size_t i = 0; i < d.fixed.size(); ++i) {
    d.fixed[i] = d.fixed[i] && d.domain[i];
    any = any || d.fixed[i];
  }
  if (!any) throw EmptyCompactumError("capacity: compactum misses every domain node");
  return d;
}

namespace {

MaskedProblem profile_problem(const Discretization& d, const PiProfile& p) {
  MaskedProblem mp{d.grid, d.domain, d.fixed, std::vector<double>(d.grid.size(), 0.0), {}};
  for (std::size_t i = 0; i < d.grid.size(); ++i) {
    if (d.fixed[i]) mp.values[i] = eval(p, d.grid.node(i));
  }
  return mp;
}

}  // namespace

CapacityResult cap_p(const CapacityProblem& problem, const PiProfile& p) {
  const Discretization d = discretize(problem);
  MaskedSolution s = solve_masked(profile_problem(d, p), Energy::Biharmonic, problem.cg);
  return {s.energy, std::move(s.u), p, s.stats};
}

GramMatrix cap_gram(const CapacityProblem& problem) {
  return cap_gram(discretize(problem), problem.cg);
}

GramMatrix cap_gram(const Discretization& d, const CgOptions& cg) {
  GramMatrix out;
  std::array<VoxelField, 4> lap;
  for (int e = 0; e < 4; ++e) {
    MaskedSolution s =
        solve_masked(profile_problem(d, PiProfile::basis(e)), Energy::Biharmonic, cg);
    lap[e] = laplacian(s.u);
    out.stats[e] = s.stats;
  }
  const double h3 = std::pow(d.grid.h(), 3);
  for (int e = 0; e < 4; ++e) {
    for (int f = e; f < 4; ++f) {
      double s = 0.0;
      for (std::size_t i = 0; i < lap[e].size(); ++i) s += lap[e][i] * lap[f][i];
      out.g(e, f) = out.g(f, e) = h3 * s;
    }
  }
  return out;
}

CapInf cap_inf(const Eigen::Matrix4d& g) {
  const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
  if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw std::invalid_argument("cap_inf: matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(g);
  const Eigen::Vector4d v = es.eigenvectors().col(0);
  CapInf out;
  out.value = es.eigenvalues()(0);
  // Sign convention: first nonzero component positive.
  double sign = 1.0;
  for (int k = 0; k < 4; ++k) {
    if (std::abs(v(k)) > 1e-12) {
      sign = v(k) > 0 ? 1.0 : -1.0;
      break;
    }
  }
  for (int k = 0; k < 4; ++k) out.b_min.b[k] = sign * v(k);
  return out;
}

CapacityResult harmonic_cap(const CapacityProblem& problem, const HarmonicOptions& opts) {
  const Discretization d = discretize(problem);
  MaskedProblem mp{d.grid, d.domain, d.fixed, std::vector<double>(d.grid.size(), 1.0), {}};
  MaskedSolution s = solve_masked(mp, Energy::Harmonic, problem.cg);
  CapacityResult out{s.energy, std::move(s.u), PiProfile::basis(0), s.stats};
  if (opts.free_space_closure) {
    // Regular part H(c): the harmonic function in the domain whose exterior
    // values are those of 1/(4 pi |x - c|).
    MaskedProblem hp{d.grid, std::vector<std::uint8_t>(d.grid.size(), 1), {},
                     std::vector<double>(d.grid.size(), 0.0), {}};
    hp.fixed.resize(d.grid.size());
    for (std::size_t i = 0; i < d.grid.size(); ++i) {
      hp.fixed[i] = !d.domain[i];
      if (hp.fixed[i]) {
        const double r = norm(d.grid.node(i) - opts.center);
        hp.values[i] = r > 0.0 ? 1.0 / (4.0 * kPi * r) : 0.0;
      }
    }
    const MaskedSolution hs = solve_masked(hp, Energy::Harmonic, problem.cg);
    const auto c = d.grid.nearest(opts.center);
    const double h0 = hs.u[d.grid.index(c[0], c[1], c[2])];
    out.value = 1.0 / (1.0 / out.value + h0);
  }
  return out;
}

double cap_domain_equivalence_check(const CompactumSpec& k, int resolution, double box_factor,
                                    const CgOptions& cg) {
  CapacityProblem ann = CapacityProblem::around(k, resolution);
  ann.cg = cg;
  const double r_out = std::get<AnnulusDomain>(ann.domain).r_outer;
  CapacityProblem box = ann;
  box.domain = BoxDomain{box_factor * r_out, {0.0, 0.0, 0.0}, true};
  box.resolution = static_cast<int>(std::lround(box_factor * resolution));
  const double c_ann = cap_inf(cap_gram(ann).g).value;
  const double c_box = cap_inf(cap_gram(box).g).value;
  return c_ann / c_box;
}

PointGram point_cap_gram(const std::vector<Vec3>& points, const CapacityDomain& domain,
                         int resolution, const CgOptions& cg) {
  PointGram out;
  const std::size_t np = points.size();
  out.e.resize(np, 4);
  out.s = Eigen::MatrixXd::Zero(np, np);
  if (np == 0) return out;
  const VoxelGrid grid = domain_grid(domain, resolution);
  const auto dom = domain_mask(domain, grid);
  std::vector<std::size_t> nodes(np);
  std::set<std::size_t> seen;
  std::vector<std::uint8_t> fixed(grid.size(), 0);
  for (std::size_t i = 0; i < np; ++i) {
    const auto c = grid.nearest(points[i]);
    nodes[i] = grid.index(c[0], c[1], c[2]);
    if (!dom[nodes[i]]) throw std::invalid_argument("point_cap_gram: point outside the domain");
    if (!seen.insert(nodes[i]).second) {
      throw std::invalid_argument("point_cap_gram: two points share a grid node; refine the grid");
    }
    fixed[nodes[i]] = 1;
    const double r = norm(points[i]);
    out.e(i, 0) = 1.0;
    for (int a = 0; a < 3; ++a) out.e(i, a + 1) = points[i][a] / r;
  }
  std::vector<VoxelField> lap(np);
  for (std::size_t i = 0; i < np; ++i) {
    MaskedProblem mp{grid, dom, fixed, std::vector<double>(grid.size(), 0.0), {}};
    mp.values[nodes[i]] = 1.0;
    const MaskedSolution s = solve_masked(mp, Energy::Biharmonic, cg);
    out.iterations += s.stats.iterations;
    lap[i] = laplacian(s.u);
  }
  const double h3 = std::pow(grid.h(), 3);
  for (std::size_t i = 0; i < np; ++i) {
    for (std::size_t j = i; j < np; ++j) {
      double s = 0.0;
      for (std::size_t n = 0; n < lap[i].size(); ++n) s += lap[i][n] * lap[j][n];
      out.s(i, j) = out.s(j, i) = h3 * s;
    }
  }
  out.g = out.e.transpose() * out.s * out.e;
  out.g = 0.5 * (out.g + out.g.transpose()).eval();
  return out;
}

}  // namespace bicap
