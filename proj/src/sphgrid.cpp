#include "bicap/sphgrid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bicap/sphere.hpp"

namespace bicap {

SphericalPoint to_spherical(const Vec3& x) {
  const double r = norm(x);
  if (!(r > 0.0)) throw std::domain_error("to_spherical: zero vector");
  SphericalPoint p;
  p.r = r;
  p.theta = std::acos(std::clamp(x[2] / r, -1.0, 1.0));
  double phi = std::atan2(x[1], x[0]);
  if (phi < 0.0) phi += 2.0 * kPi;
  if (phi >= 2.0 * kPi) phi = 0.0;
  p.phi = phi;
  return p;
}

Vec3 from_spherical(const SphericalPoint& p) {
  const double st = std::sin(p.theta);
  return {p.r * st * std::cos(p.phi), p.r * st * std::sin(p.phi), p.r * std::cos(p.theta)};
}

LogPoint to_log_coords(const Vec3& x) {
  const double r = norm(x);
  if (!(r > 0.0)) throw std::domain_error("to_log_coords: zero vector");
  return {-std::log(r), (1.0 / r) * x};
}

Vec3 from_log_coords(const LogPoint& p) { return std::exp(-p.t) * p.omega; }

// ---------------------------------------------------------------------------

VoxelGrid::VoxelGrid(Vec3 origin, double h, std::array<int, 3> dims)
    : origin_(origin), h_(h), dims_(dims) {
  if (!(h > 0.0)) throw std::invalid_argument("VoxelGrid: spacing must be positive");
  for (int d : dims) {
    if (d < 3) throw std::invalid_argument("VoxelGrid: need at least 3 nodes per axis");
  }
}

VoxelGrid VoxelGrid::centered_cube(double half_width, int cells) {
  const double h = 2.0 * half_width / cells;
  return VoxelGrid({-half_width, -half_width, -half_width}, h, {cells + 1, cells + 1, cells + 1});
}

std::array<int, 3> VoxelGrid::ijk(std::size_t idx) const {
  const int i = static_cast<int>(idx % dims_[0]);
  idx /= dims_[0];
  const int j = static_cast<int>(idx % dims_[1]);
  const int k = static_cast<int>(idx / dims_[1]);
  return {i, j, k};
}

std::array<int, 3> VoxelGrid::nearest(const Vec3& x) const {
  std::array<int, 3> c{};
  for (int a = 0; a < 3; ++a) {
    const long v = std::lround((x[a] - origin_[a]) / h_);
    c[a] = static_cast<int>(std::clamp<long>(v, 0, dims_[a] - 1));
  }
  return c;
}

bool VoxelGrid::same_layout(const VoxelGrid& o) const {
  return dims_ == o.dims_ && h_ == o.h_ && origin_ == o.origin_;
}

AnnulusGrid::AnnulusGrid(double s_inner, double s_outer, int n_t, int n_theta, int n_phi)
    : s_inner_(s_inner), s_outer_(s_outer), n_t_(n_t), n_theta_(n_theta), n_phi_(n_phi) {
  if (!(s_inner > 0.0) || !(s_inner < s_outer)) {
    throw std::invalid_argument("AnnulusGrid: need 0 < s_inner < s_outer");
  }
  if (n_t < 3 || n_theta < 2 || n_phi < 4 || n_phi % 2 != 0) {
    throw std::invalid_argument("AnnulusGrid: need n_t >= 3, n_theta >= 2, even n_phi >= 4");
  }
  t_min_ = -std::log(s_outer);
  t_max_ = -std::log(s_inner);
  dt_ = (t_max_ - t_min_) / (n_t - 1);
  sphere_weights_ = fejer_weights(n_theta);
  for (double& w : sphere_weights_) w *= 2.0 * kPi / n_phi;
}

double AnnulusGrid::r(int it) const { return std::exp(-t(it)); }

Vec3 AnnulusGrid::omega(int ith, int iph) const {
  return from_spherical({1.0, theta(ith), phi(iph)});
}

Vec3 AnnulusGrid::node(int it, int ith, int iph) const { return r(it) * omega(ith, iph); }

double AnnulusGrid::t_weight(int it) const {
  return (it == 0 || it == n_t_ - 1) ? 0.5 * dt_ : dt_;
}

AnnulusGrid AnnulusGrid::reflected() const {
  return AnnulusGrid(1.0 / s_outer_, 1.0 / s_inner_, n_t_, n_theta_, n_phi_);
}

bool AnnulusGrid::same_layout(const AnnulusGrid& o) const {
  return n_t_ == o.n_t_ && n_theta_ == o.n_theta_ && n_phi_ == o.n_phi_ &&
         std::abs(t_min_ - o.t_min_) < 1e-12 && std::abs(t_max_ - o.t_max_) < 1e-12;
}

template <class Grid>
Field<Grid>::Field(Grid g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
  if (values.size() != grid.size()) {
    throw std::invalid_argument("Field: value count does not match node count");
  }
}

template struct Field<VoxelGrid>;
template struct Field<AnnulusGrid>;

VoxelField sample(const VoxelGrid& grid, const std::function<double(const Vec3&)>& f) {
  VoxelField out(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) out[i] = f(grid.node(i));
  return out;
}

AnnulusField sample(const AnnulusGrid& grid, const std::function<double(const Vec3&)>& f) {
  AnnulusField out(grid);
  for (int it = 0; it < grid.n_t(); ++it) {
    for (int k = 0; k < grid.n_theta(); ++k) {
      for (int j = 0; j < grid.n_phi(); ++j) out[grid.index(it, k, j)] = f(grid.node(it, k, j));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

VoxelField laplacian(const VoxelField& f) {
  const VoxelGrid& g = f.grid;
  const auto [nx, ny, nz] = g.dims();
  const double ih2 = 1.0 / (g.h() * g.h());
  const std::size_t sy = nx, sz = static_cast<std::size_t>(nx) * ny;
  VoxelField out(g);
  const std::vector<double>& u = f.values;
  for (int k = 0; k < nz; ++k) {
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        const std::size_t c = g.index(i, j, k);
        double s = -6.0 * u[c];
        if (i > 0) s += u[c - 1];
        if (i + 1 < nx) s += u[c + 1];
        if (j > 0) s += u[c - sy];
        if (j + 1 < ny) s += u[c + sy];
        if (k > 0) s += u[c - sz];
        if (k + 1 < nz) s += u[c + sz];
        out[c] = s * ih2;
      }
    }
  }
  return out;
}

VoxelField bilaplacian(const VoxelField& f) { return laplacian(laplacian(f)); }

AnnulusField t_derivative(const AnnulusField& f, int order) {
  if (order != 1 && order != 2) throw std::invalid_argument("t_derivative: order must be 1 or 2");
  const AnnulusGrid& g = f.grid;
  const int nt = g.n_t();
  const std::size_t na = g.angular_size();
  const double dt = g.dt();
  AnnulusField out(g);
  const double* u = f.values.data();
  for (int it = 0; it < nt; ++it) {
    for (std::size_t a = 0; a < na; ++a) {
      auto at = [&](int i) { return u[i * na + a]; };
      double d;
      if (order == 1) {
        if (it == 0) {
          d = (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * dt);
        } else if (it == nt - 1) {
          const int m = nt - 1;
          d = (3.0 * at(m) - 4.0 * at(m - 1) + at(m - 2)) / (2.0 * dt);
        } else {
          d = (at(it + 1) - at(it - 1)) / (2.0 * dt);
        }
      } else if (it == 0 || it == nt - 1) {
        const int m = (it == 0) ? 0 : nt - 1;
        const int s = (it == 0) ? 1 : -1;
        d = (nt >= 4) ? (2.0 * at(m) - 5.0 * at(m + s) + 4.0 * at(m + 2 * s) - at(m + 3 * s)) /
                            (dt * dt)
                      : (at(m) - 2.0 * at(m + s) + at(m + 2 * s)) / (dt * dt);
      } else {
        d = (at(it + 1) - 2.0 * at(it) + at(it - 1)) / (dt * dt);
      }
      out[it * na + a] = d;
    }
  }
  return out;
}

AnnulusField laplacian(const AnnulusField& f, AngularScheme scheme) {
  const AnnulusGrid& g = f.grid;
  const std::size_t na = g.angular_size();
  SphereOps ops(g);
  const AnnulusField d1 = t_derivative(f, 1);
  AnnulusField out = t_derivative(f, 2);
  std::vector<double> lb(na);
  for (int it = 0; it < g.n_t(); ++it) {
    std::span<const double> slice(f.values.data() + it * na, na);
    ops.laplace_beltrami(slice, lb, scheme);
    const double e2t = std::exp(2.0 * g.t(it));
    for (std::size_t a = 0; a < na; ++a) {
      const std::size_t i = it * na + a;
      out[i] = e2t * (out[i] - d1[i] + lb[a]);
    }
  }
  return out;
}

AnnulusField bilaplacian(const AnnulusField& f, AngularScheme scheme) {
  return laplacian(laplacian(f, scheme), scheme);
}

AnnulusField kelvin_transform(const AnnulusField& u) {
  const AnnulusGrid& g = u.grid;
  AnnulusGrid img = g.reflected();
  AnnulusField out(img);
  const std::size_t na = g.angular_size();
  const int nt = g.n_t();
  for (int it = 0; it < nt; ++it) {
    const double scale = std::exp(-img.t(it));
    const std::size_t src = static_cast<std::size_t>(nt - 1 - it) * na;
    for (std::size_t a = 0; a < na; ++a) out[it * na + a] = scale * u[src + a];
  }
  return out;
}

AnnulusField kelvin_transform(const AnnulusField& u, const AnnulusGrid& target) {
  AnnulusField out(target);
  for (int it = 0; it < target.n_t(); ++it) {
    const double tp = target.t(it);
    const double scale = std::exp(-tp);
    for (int k = 0; k < target.n_theta(); ++k) {
      for (int j = 0; j < target.n_phi(); ++j) {
        out[target.index(it, k, j)] = scale * interpolate(u, -tp, target.theta(k), target.phi(j));
      }
    }
  }
  return out;
}

double interpolate(const AnnulusField& f, double t, double theta, double phi) {
  const AnnulusGrid& g = f.grid;
  const double tol = 1e-9 * std::max(1.0, g.dt());
  if (t < g.t_min() - tol || t > g.t_max() + tol) {
    throw std::domain_error("interpolate: t outside the grid range");
  }
  const int nt = g.n_t(), nth = g.n_theta(), nph = g.n_phi();
  double xt = std::clamp((t - g.t_min()) / g.dt(), 0.0, nt - 1.0);
  int i0 = std::min(static_cast<int>(xt), nt - 2);
  const double ft = xt - i0;

  // theta index in node units; k = -1 and k = nth are the antipodal
  // continuations across the poles.
  const double xth = std::clamp(theta / g.dtheta() - 0.5, -0.5, nth - 0.5);
  int k0 = static_cast<int>(std::floor(xth));
  const double fth = xth - k0;
  double xph = std::fmod(phi / g.dphi(), static_cast<double>(nph));
  if (xph < 0.0) xph += nph;
  const int j0 = static_cast<int>(xph) % nph;
  const double fph = xph - std::floor(xph);

  auto value = [&](int it, int k, int j) {
    j = ((j % nph) + nph) % nph;
    if (k < 0) {
      k = 0;
      j = (j + nph / 2) % nph;
    } else if (k >= nth) {
      k = nth - 1;
      j = (j + nph / 2) % nph;
    }
    return f[g.index(it, k, j)];
  };
  double acc = 0.0;
  for (int a = 0; a < 2; ++a) {
    const double wt = a ? ft : 1.0 - ft;
    for (int b = 0; b < 2; ++b) {
      const double wth = b ? fth : 1.0 - fth;
      for (int c = 0; c < 2; ++c) {
        const double wph = c ? fph : 1.0 - fph;
        const double w = wt * wth * wph;
        if (w != 0.0) acc += w * value(i0 + a, k0 + b, j0 + c);
      }
    }
  }
  return acc;
}

// ---------------------------------------------------------------------------

namespace {

// Distance in a meridian half-plane from (r cos d, r sin d) to the segment
// {rho (1, 0) : rho in [lo, hi]}.
double segment_distance(double r, double d, double lo, double hi) {
  const double px = r * std::cos(d), py = r * std::sin(d);
  const double rho = std::clamp(px, lo, hi);
  return std::hypot(px - rho, py);
}

double angle_between(const Vec3& a, const Vec3& b) {
  const double na = norm(a), nb = norm(b);
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::acos(std::clamp(dot(a, b) / (na * nb), -1.0, 1.0));
}

struct DistanceVisitor {
  const Vec3& x;

  double operator()(const VoxelMaskShape& m) const {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m.mask.size(); ++i) {
      if (m.mask[i]) best = std::min(best, norm(x - m.grid.node(i)));
    }
    return best;
  }

  double operator()(const CuspLayerShape& c) const {
    const double r = norm(x);
    const double lo = c.s, hi = c.a * c.s;
    if (r == 0.0) return lo;
    const double rc = std::clamp(r, lo, hi);
    const double th = std::acos(std::clamp(x[2] / r, -1.0, 1.0));
    const double open = c.profile(rc);
    if (th <= open) return std::abs(r - rc);
    return segment_distance(r, th - open, lo, hi);
  }

  double operator()(const ConeSectionShape& c) const {
    const Vec3 axis{c.b[1], c.b[2], c.b[3]};
    const double na = norm(axis);
    const double r = norm(x);
    double d;
    if (na == 0.0) {
      if (c.b[0] != 0.0) return std::numeric_limits<double>::infinity();
      d = (r < c.r_inner) ? c.r_inner - r : std::max(0.0, r - c.r_outer);
    } else if (r == 0.0) {
      d = c.r_inner;
    } else {
      const double cpsi = -c.b[0] / na;
      if (std::abs(cpsi) > 1.0) return std::numeric_limits<double>::infinity();
      const double psi = std::acos(cpsi);
      d = segment_distance(r, angle_between(x, axis) - psi, c.r_inner, c.r_outer);
    }
    return std::max(0.0, d - 0.5 * c.thickness);
  }

  double operator()(const PointSetShape& p) const {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < p.points.size(); ++i) {
      const double rad = p.radii.empty() ? 0.0 : p.radii[i];
      best = std::min(best, std::max(0.0, norm(x - p.points[i]) - rad));
    }
    return best;
  }

  double operator()(const ShellShape& s) const {
    const double r = norm(x);
    if (r == 0.0) return s.r_inner;
    const double th = std::acos(std::clamp(x[2] / r, -1.0, 1.0));
    if (th >= s.opening) {
      return (r < s.r_inner) ? s.r_inner - r : std::max(0.0, r - s.r_outer);
    }
    return segment_distance(r, s.opening - th, s.r_inner, s.r_outer);
  }

  double operator()(const BallShape& b) const {
    return std::max(0.0, norm(x - b.center) - b.radius);
  }
};

struct RadiiVisitor {
  std::pair<double, double> operator()(const VoxelMaskShape& m) const {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (std::size_t i = 0; i < m.mask.size(); ++i) {
      if (!m.mask[i]) continue;
      const double r = norm(m.grid.node(i));
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    if (hi == 0.0 && !std::isfinite(lo)) return {0.0, 0.0};
    return {lo, hi};
  }
  std::pair<double, double> operator()(const CuspLayerShape& c) const { return {c.s, c.a * c.s}; }
  std::pair<double, double> operator()(const ConeSectionShape& c) const {
    return {std::max(0.0, c.r_inner - 0.5 * c.thickness), c.r_outer + 0.5 * c.thickness};
  }
  std::pair<double, double> operator()(const PointSetShape& p) const {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (std::size_t i = 0; i < p.points.size(); ++i) {
      const double rad = p.radii.empty() ? 0.0 : p.radii[i];
      const double r = norm(p.points[i]);
      lo = std::min(lo, std::max(0.0, r - rad));
      hi = std::max(hi, r + rad);
    }
    if (p.points.empty()) return {0.0, 0.0};
    return {lo, hi};
  }
  std::pair<double, double> operator()(const ShellShape& s) const { return {s.r_inner, s.r_outer}; }
  std::pair<double, double> operator()(const BallShape& b) const {
    const double c = norm(b.center);
    return {std::max(0.0, c - b.radius), c + b.radius};
  }
};

}  // namespace

CompactumSpec::CompactumSpec(CompactumVariant shape) : shape_(std::move(shape)) {
  if (const auto* p = std::get_if<PointSetShape>(&shape_)) {
    if (!p->radii.empty() && p->radii.size() != p->points.size()) {
      throw std::invalid_argument("PointSet: radii count must match point count");
    }
  }
  if (const auto* m = std::get_if<VoxelMaskShape>(&shape_)) {
    if (m->mask.size() != m->grid.size()) {
      throw std::invalid_argument("VoxelMask: mask size does not match its grid");
    }
  }
}

double CompactumSpec::distance(const Vec3& x) const {
  return std::visit(DistanceVisitor{x}, shape_);
}

std::pair<double, double> CompactumSpec::bounding_radii() const {
  return std::visit(RadiiVisitor{}, shape_);
}

bool CompactumSpec::contains_origin() const { return distance({0.0, 0.0, 0.0}) == 0.0; }

std::string CompactumSpec::kind() const {
  static const char* names[] = {"voxel_mask", "cusp_layer", "cone_section",
                                "point_set",  "shell",      "ball"};
  return names[shape_.index()];
}

std::vector<std::uint8_t> rasterize_core(const CompactumSpec& spec, const VoxelGrid& grid) {
  std::vector<std::uint8_t> mask(grid.size(), 0);
  if (const auto* m = std::get_if<VoxelMaskShape>(&spec.shape())) {
    if (m->grid.same_layout(grid)) return m->mask;
    for (std::size_t i = 0; i < m->mask.size(); ++i) {
      if (!m->mask[i]) continue;
      const Vec3 p = m->grid.node(i);
      const auto c = grid.nearest(p);
      if (norm(grid.node(c[0], c[1], c[2]) - p) <= 0.5 * grid.h() * std::sqrt(3.0) + 1e-12) {
        mask[grid.index(c[0], c[1], c[2])] = 1;
      }
    }
    return mask;
  }
  const double tol = 0.5 * grid.h() * (1.0 + 1e-9);
  const auto [lo, hi] = spec.bounding_radii();
  if (const auto* p = std::get_if<PointSetShape>(&spec.shape())) {
    // Only the neighbourhood of each point can qualify.
    for (std::size_t n = 0; n < p->points.size(); ++n) {
      const double rad = (p->radii.empty() ? 0.0 : p->radii[n]) + tol;
      const Vec3& q = p->points[n];
      const int reach = static_cast<int>(std::ceil(rad / grid.h())) + 1;
      const auto c = grid.nearest(q);
      for (int k = c[2] - reach; k <= c[2] + reach; ++k) {
        for (int j = c[1] - reach; j <= c[1] + reach; ++j) {
          for (int i = c[0] - reach; i <= c[0] + reach; ++i) {
            if (i < 0 || j < 0 || k < 0 || i >= grid.dims()[0] || j >= grid.dims()[1] ||
                k >= grid.dims()[2]) {
              continue;
            }
            if (norm(grid.node(i, j, k) - q) <= rad) mask[grid.index(i, j, k)] = 1;
          }
        }
      }
    }
    return mask;
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Vec3 x = grid.node(i);
    const double r = norm(x);
    if (r < lo - tol || r > hi + tol) continue;
    if (spec.distance(x) <= tol) mask[i] = 1;
  }
  return mask;
}

std::vector<std::uint8_t> dilate(const std::vector<std::uint8_t>& mask, const VoxelGrid& grid) {
  std::vector<std::uint8_t> out(mask);
  const auto [nx, ny, nz] = grid.dims();
  for (int k = 0; k < nz; ++k) {
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        if (!mask[grid.index(i, j, k)]) continue;
        if (i > 0) out[grid.index(i - 1, j, k)] = 1;
        if (i + 1 < nx) out[grid.index(i + 1, j, k)] = 1;
        if (j > 0) out[grid.index(i, j - 1, k)] = 1;
        if (j + 1 < ny) out[grid.index(i, j + 1, k)] = 1;
        if (k > 0) out[grid.index(i, j, k - 1)] = 1;
        if (k + 1 < nz) out[grid.index(i, j, k + 1)] = 1;
      }
    }
  }
  return out;
}

std::vector<std::uint8_t> rasterize(const CompactumSpec& spec, const VoxelGrid& grid) {
  auto core = rasterize_core(spec, grid);
  if (std::none_of(core.begin(), core.end(), [](std::uint8_t b) { return b != 0; })) {
    throw EmptyCompactumError("rasterize: compactum " + spec.kind() + " misses every grid node");
  }
  return dilate(core, grid);
}

}  // namespace bicap
