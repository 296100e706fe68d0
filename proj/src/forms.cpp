#include "bicap/forms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bicap/kernel.hpp"
#include "bicap/sphere.hpp"

namespace bicap {

namespace {

// Every quantity the forms need, on the full grid.
struct Derivs {
  AnnulusField f, ft, ftt;
  std::vector<double> lb, g_th, g_ph, gt_th, gt_ph;
};

Derivs derivs(const AnnulusField& f, AngularScheme scheme) {
  const AnnulusGrid& g = f.grid;
  const std::size_t na = g.angular_size(), n = g.size();
  SphereOps ops(g);
  Derivs d{f, t_derivative(f, 1), t_derivative(f, 2), {}, {}, {}, {}, {}};
  d.lb.resize(n);
  d.g_th.resize(n);
  d.g_ph.resize(n);
  d.gt_th.resize(n);
  d.gt_ph.resize(n);
  for (int it = 0; it < g.n_t(); ++it) {
    const std::size_t o = it * na;
    std::span<const double> s(f.values.data() + o, na);
    std::span<const double> st(d.ft.values.data() + o, na);
    ops.laplace_beltrami(s, std::span<double>(d.lb.data() + o, na), scheme);
    ops.gradient(s, std::span<double>(d.g_th.data() + o, na),
                 std::span<double>(d.g_ph.data() + o, na), scheme);
    ops.gradient(st, std::span<double>(d.gt_th.data() + o, na),
                 std::span<double>(d.gt_ph.data() + o, na), scheme);
  }
  return d;
}

void require_same(const AnnulusField& v, const AnnulusField& w) {
  if (!v.grid.same_layout(w.grid)) throw std::invalid_argument("forms: fields live on different grids");
}

// Slices [first - 2, last + 2] around the nonzero support of the fields.
std::pair<int, int> support_range(const AnnulusField& v, const AnnulusField* w) {
  const AnnulusGrid& g = v.grid;
  const std::size_t na = g.angular_size();
  int first = g.n_t(), last = -1;
  for (int it = 0; it < g.n_t(); ++it) {
    bool any = false;
    for (std::size_t a = 0; a < na && !any; ++a) {
      any = v[it * na + a] != 0.0 || (w && (*w)[it * na + a] != 0.0);
    }
    if (any) {
      first = std::min(first, it);
      last = it;
    }
  }
  if (last < 0) return {0, -1};
  return {std::max(0, first - 2), std::min(g.n_t() - 1, last + 2)};
}

// Angular quadrature of a per-node product over slice it.
template <class Fn>
double slice_integral(const AnnulusGrid& g, int it, Fn&& fn) {
  const std::size_t na = g.angular_size();
  double total = 0.0;
  for (int k = 0; k < g.n_theta(); ++k) {
    double row = 0.0;
    for (int j = 0; j < g.n_phi(); ++j) row += fn(it * na + k * g.n_phi() + j);
    total += g.sphere_weight(k) * row;
  }
  return total;
}

FormValue assemble(std::vector<std::pair<std::string, double>> groups) {
  FormValue out;
  out.breakdown = std::move(groups);
  for (const auto& [name, val] : out.breakdown) out.value += val;
  return out;
}

// The five weighted groups over slices [i0, i1] with t weights wt.
std::vector<std::pair<std::string, double>> five_groups(const Derivs& a, const Derivs& b,
                                                        const WeightProfile& wp, int i0, int i1,
                                                        const std::vector<double>& wt) {
  const AnnulusGrid& g = a.f.grid;
  double s_lb = 0, s_dtg = 0, s_dt2 = 0, s_g = 0, s_dt = 0;
  for (int it = i0; it <= i1; ++it) {
    const auto& G = wp.samples[it];
    const double w = wt[it];
    const double c_grad = -(G[2] + G[1] + 2.0 * G[0]);
    const double c_dt = -(2.0 * G[2] + 3.0 * G[1] - G[0]);
    s_lb += w * G[0] * slice_integral(g, it, [&](std::size_t i) { return a.lb[i] * b.lb[i]; });
    s_dtg += w * 2.0 * G[0] * slice_integral(g, it, [&](std::size_t i) {
               return a.gt_th[i] * b.gt_th[i] + a.gt_ph[i] * b.gt_ph[i];
             });
    s_dt2 += w * G[0] * slice_integral(g, it, [&](std::size_t i) { return a.ftt[i] * b.ftt[i]; });
    s_g += w * c_grad * slice_integral(g, it, [&](std::size_t i) {
             return a.g_th[i] * b.g_th[i] + a.g_ph[i] * b.g_ph[i];
           });
    s_dt += w * c_dt * slice_integral(g, it, [&](std::size_t i) { return a.ft[i] * b.ft[i]; });
  }
  return {{"lb", s_lb}, {"dt_grad", s_dtg}, {"dt2", s_dt2}, {"grad", s_g}, {"dt", s_dt}};
}

std::vector<double> trapezoid_weights(const AnnulusGrid& g, int i0, int i1) {
  std::vector<double> wt(g.n_t(), 0.0);
  for (int it = i0; it <= i1; ++it) wt[it] = (it == i0 || it == i1) ? 0.5 * g.dt() : g.dt();
  return wt;
}

std::vector<double> grid_weights(const AnnulusGrid& g) {
  std::vector<double> wt(g.n_t());
  for (int it = 0; it < g.n_t(); ++it) wt[it] = g.t_weight(it);
  return wt;
}

FormValue bilinear(const AnnulusField& v, const AnnulusField& w, const WeightProfile& wp,
                   AngularScheme scheme, bool with_zero_order) {
  require_same(v, w);
  const AnnulusGrid& g = v.grid;
  if (wp.samples.size() != static_cast<std::size_t>(g.n_t())) {
    throw std::invalid_argument("forms: weight profile does not match the grid");
  }
  const auto [i0, i1] = support_range(v, &w);
  if (i1 < 0) {
    auto zero = five_groups(derivs(v, scheme), derivs(w, scheme), wp, 0, -1, {});
    if (with_zero_order) zero.emplace_back("zero_order", 0.0);
    return assemble(std::move(zero));
  }
  const Derivs dv = derivs(v, scheme);
  const Derivs dw = (&v == &w) ? dv : derivs(w, scheme);
  const auto wt = grid_weights(g);
  auto groups = five_groups(dv, dw, wp, i0, i1, wt);
  if (with_zero_order) {
    double s = 0.0;
    for (int it = i0; it <= i1; ++it) {
      const auto& G = wp.samples[it];
      const double c = 0.5 * (G[4] + 2.0 * G[3] - G[2] - 2.0 * G[1]);
      if (c == 0.0) continue;
      s += wt[it] * c * slice_integral(g, it, [&](std::size_t i) { return v[i] * w[i]; });
    }
    if (wp.point_mass != 0.0) s += 0.5 * wp.point_mass * sphere_product(v, w, wp.tau);
    groups.emplace_back("zero_order", s);
  }
  return assemble(std::move(groups));
}

}  // namespace

double FormValue::group(const std::string& name) const {
  for (const auto& [n, v] : breakdown) {
    if (n == name) return v;
  }
  throw std::out_of_range("FormValue: no group named " + name);
}

WeightProfile WeightProfile::kernel(const AnnulusGrid& grid, double tau) {
  WeightProfile wp;
  wp.tau = tau;
  wp.point_mass = 1.0;
  wp.samples.resize(grid.n_t());
  for (int it = 0; it < grid.n_t(); ++it) wp.samples[it] = kernel_sample(grid.t(it) - tau).d;
  return wp;
}

WeightProfile WeightProfile::from_function(const AnnulusGrid& grid,
                                           const std::function<std::array<double, 5>(double)>& g) {
  WeightProfile wp;
  wp.samples.resize(grid.n_t());
  for (int it = 0; it < grid.n_t(); ++it) wp.samples[it] = g(grid.t(it));
  return wp;
}

AnnulusField log_field(const AnnulusField& u) {
  AnnulusField v(u.grid);
  const std::size_t na = u.grid.angular_size();
  for (int it = 0; it < u.grid.n_t(); ++it) {
    const double e = std::exp(u.grid.t(it));
    for (std::size_t a = 0; a < na; ++a) v[it * na + a] = e * u[it * na + a];
  }
  return v;
}

double delta_energy(const VoxelField& u, const std::vector<std::uint8_t>* region) {
  const VoxelField lu = laplacian(u);
  const double h3 = std::pow(u.grid.h(), 3);
  double s = 0.0;
  for (std::size_t i = 0; i < lu.size(); ++i) {
    if (!region || (*region)[i]) s += lu[i] * lu[i];
  }
  return h3 * s;
}

double delta_energy(const AnnulusField& u, AngularScheme scheme) {
  const AnnulusField lu = laplacian(u, scheme);
  const AnnulusGrid& g = u.grid;
  double s = 0.0;
  for (int it = 0; it < g.n_t(); ++it) {
    const double w = g.t_weight(it) * std::exp(-3.0 * g.t(it));
    s += w * slice_integral(g, it, [&](std::size_t i) { return lu[i] * lu[i]; });
  }
  return s;
}

FormValue psi_form(const AnnulusField& u, AngularScheme scheme) {
  const AnnulusGrid& g = u.grid;
  const Derivs d = derivs(u, scheme);
  double s1 = 0, s2 = 0, s3 = 0, s4 = 0, s5 = 0;
  for (int it = 0; it < g.n_t(); ++it) {
    const double w = g.t_weight(it) * std::exp(g.t(it));
    s1 += w * slice_integral(g, it, [&](std::size_t i) {
            const double q = d.ftt[i] + d.ft[i];
            return q * q;
          });
    s2 += w * 2.0 * slice_integral(g, it, [&](std::size_t i) { return d.ft[i] * d.ft[i]; });
    s3 += w * 2.0 * slice_integral(g, it, [&](std::size_t i) {
            return d.gt_th[i] * d.gt_th[i] + d.gt_ph[i] * d.gt_ph[i];
          });
    s4 += w * slice_integral(g, it, [&](std::size_t i) { return d.lb[i] * d.lb[i]; });
    s5 += w * 2.0 * slice_integral(g, it, [&](std::size_t i) { return u[i] * d.lb[i]; });
  }
  return assemble({{"d2r", s1}, {"dr", s2}, {"dr_grad", s3}, {"lb_sq", s4}, {"v_lb", s5}});
}

FormValue b_form(const AnnulusField& v, const AnnulusField& w, const WeightProfile& weights,
                 AngularScheme scheme) {
  return bilinear(v, w, weights, scheme, true);
}

FormValue b_tilde_form(const AnnulusField& v, const AnnulusField& w, const WeightProfile& weights,
                       AngularScheme scheme) {
  return bilinear(v, w, weights, scheme, false);
}

FormValue q_form(const AnnulusField& u, const RadialRange& region, double tau,
                 AngularScheme scheme) {
  const AnnulusGrid& g = u.grid;
  if (!(region.r_inner > 0.0) || !(region.r_inner < region.r_outer)) {
    throw std::invalid_argument("q_form: region needs 0 < r_inner < r_outer");
  }
  const double t_lo = -std::log(region.r_outer), t_hi = -std::log(region.r_inner);
  const double eps = 1e-9 * g.dt();
  int i0 = g.n_t(), i1 = -1;
  for (int it = 0; it < g.n_t(); ++it) {
    if (g.t(it) >= t_lo - eps && g.t(it) <= t_hi + eps) {
      i0 = std::min(i0, it);
      i1 = it;
    }
  }
  const AnnulusField v = log_field(u);
  const WeightProfile wp = WeightProfile::kernel(g, tau);
  if (i1 < i0) return assemble(five_groups(derivs(v, scheme), derivs(v, scheme), wp, 0, -1, {}));
  const Derivs d = derivs(v, scheme);
  return assemble(five_groups(d, d, wp, i0, i1, trapezoid_weights(g, i0, i1)));
}

IdentityCheck main_identity_check(const AnnulusField& u, const WeightProfile& weights,
                                  AngularScheme scheme) {
  const AnnulusGrid& g = u.grid;
  const std::size_t na = g.angular_size();
  double peak = 0.0;
  for (double x : u.values) peak = std::max(peak, std::abs(x));
  for (int it : {0, 1, g.n_t() - 2, g.n_t() - 1}) {
    for (std::size_t a = 0; a < na; ++a) {
      if (std::abs(u[it * na + a]) > 1e-12 * peak) {
        throw std::invalid_argument("main_identity_check: u is not compactly supported in the grid");
      }
    }
  }
  AnnulusField w(g);
  for (int it = 0; it < g.n_t(); ++it) {
    const double f = std::exp(g.t(it)) * weights.samples.at(it)[0];
    for (std::size_t a = 0; a < na; ++a) w[it * na + a] = f * u[it * na + a];
  }
  const AnnulusField lu = laplacian(u, scheme);
  const AnnulusField lw = laplacian(w, scheme);
  IdentityCheck out;
  for (int it = 0; it < g.n_t(); ++it) {
    const double wt = g.t_weight(it) * std::exp(-3.0 * g.t(it));
    out.lhs += wt * slice_integral(g, it, [&](std::size_t i) { return lu[i] * lw[i]; });
  }
  const AnnulusField v = log_field(u);
  out.rhs = b_form(v, v, weights, scheme);
  return out;
}

double sphere_product(const AnnulusField& v, const AnnulusField& w, double tau) {
  require_same(v, w);
  const AnnulusGrid& g = v.grid;
  const double tol = 1e-9 * g.dt();
  if (tau < g.t_min() - tol || tau > g.t_max() + tol) {
    throw std::domain_error("sphere_trace: tau outside the grid's t range");
  }
  const double x = std::clamp((tau - g.t_min()) / g.dt(), 0.0, g.n_t() - 1.0);
  const int i0 = std::min(static_cast<int>(x), g.n_t() - 2);
  const double f = x - i0;
  const std::size_t na = g.angular_size();
  const std::size_t o0 = i0 * na, o1 = (i0 + 1) * na;
  double total = 0.0;
  for (int k = 0; k < g.n_theta(); ++k) {
    double row = 0.0;
    for (int j = 0; j < g.n_phi(); ++j) {
      const std::size_t a = k * g.n_phi() + j;
      const double va = (1.0 - f) * v[o0 + a] + f * v[o1 + a];
      const double wa = (1.0 - f) * w[o0 + a] + f * w[o1 + a];
      row += va * wa;
    }
    total += g.sphere_weight(k) * row;
  }
  return total;
}

double sphere_trace(const AnnulusField& v, double tau) { return sphere_product(v, v, tau); }

}  // namespace bicap
