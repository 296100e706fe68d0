#include "bicap/sphere.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <stdexcept>

#include "fftw_planner.hpp"

namespace bicap {

namespace {

struct PlanPair {
  fftw_plan forward;
  fftw_plan backward;
};

// Plans are created once per length and reused through the new-array
// execute interface, which is safe to call concurrently.
const PlanPair& plans_for(int n) {
  static std::map<int, PlanPair> cache;
  std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<double> in(n);
  std::vector<std::complex<double>> out(n / 2 + 1);
  auto* cout_ptr = reinterpret_cast<fftw_complex*>(out.data());
  PlanPair p{
      fftw_plan_dft_r2c_1d(n, in.data(), cout_ptr, FFTW_ESTIMATE | FFTW_UNALIGNED),
      fftw_plan_dft_c2r_1d(n, cout_ptr, in.data(), FFTW_ESTIMATE | FFTW_UNALIGNED)};
  return cache.emplace(n, p).first->second;
}

// Spectral derivative of a real periodic sequence with spacing 2 pi / n;
// order 1 or 2.
void periodic_derivative(std::vector<double>& g, int order) {
  const int n = static_cast<int>(g.size());
  const PlanPair& plans = plans_for(n);
  std::vector<std::complex<double>> spec(n / 2 + 1);
  auto* spec_ptr = reinterpret_cast<fftw_complex*>(spec.data());
  fftw_execute_dft_r2c(plans.forward, g.data(), spec_ptr);
  for (int m = 0; m <= n / 2; ++m) {
    std::complex<double> mult;
    if (order == 1) {
      mult = (2 * m == n) ? 0.0 : std::complex<double>(0.0, m);
    } else {
      mult = -static_cast<double>(m) * m;
    }
    spec[m] *= mult / static_cast<double>(n);
  }
  fftw_execute_dft_c2r(plans.backward, spec_ptr, g.data());
}

}  // namespace

std::vector<double> fejer_weights(int n) {
  std::vector<double> w(n);
  for (int k = 0; k < n; ++k) {
    const double th = (k + 0.5) * kPi / n;
    double s = 0.0;
    for (int j = 1; j <= n / 2; ++j) s += std::cos(2.0 * j * th) / (4.0 * j * j - 1.0);
    w[k] = 2.0 / n * (1.0 - 2.0 * s);
  }
  return w;
}

SphereOps::SphereOps(int n_theta, int n_phi) : n_theta_(n_theta), n_phi_(n_phi) {
  if (n_theta < 2 || n_phi < 4 || n_phi % 2 != 0) {
    throw std::invalid_argument("SphereOps: need n_theta >= 2 and even n_phi >= 4");
  }
  weights_ = fejer_weights(n_theta);
  for (double& w : weights_) w *= 2.0 * kPi / n_phi;
}

double SphereOps::integrate(std::span<const double> v) const {
  double total = 0.0;
  for (int k = 0; k < n_theta_; ++k) {
    double row = 0.0;
    for (int j = 0; j < n_phi_; ++j) row += v[k * n_phi_ + j];
    total += weights_[k] * row;
  }
  return total;
}

void SphereOps::spectral_theta(std::span<const double> v, std::span<double> out,
                               int order) const {
  // Meridian through phi_j continued over the pole onto phi_j + pi gives a
  // 2 pi periodic function of theta sampled at 2 n_theta uniform nodes.
  const int nt = n_theta_;
  const int half = n_phi_ / 2;
  std::vector<double> g(2 * nt);
  for (int j = 0; j < half; ++j) {
    const int jo = j + half;
    for (int k = 0; k < nt; ++k) {
      g[k] = v[k * n_phi_ + j];
      g[2 * nt - 1 - k] = v[k * n_phi_ + jo];
    }
    periodic_derivative(g, order);
    const double sign_back = (order == 1) ? -1.0 : 1.0;
    for (int k = 0; k < nt; ++k) {
      out[k * n_phi_ + j] = g[k];
      out[k * n_phi_ + jo] = sign_back * g[2 * nt - 1 - k];
    }
  }
}

void SphereOps::spectral_phi(std::span<const double> v, std::span<double> out,
                             int order) const {
  std::vector<double> g(n_phi_);
  for (int k = 0; k < n_theta_; ++k) {
    for (int j = 0; j < n_phi_; ++j) g[j] = v[k * n_phi_ + j];
    periodic_derivative(g, order);
    for (int j = 0; j < n_phi_; ++j) out[k * n_phi_ + j] = g[j];
  }
}

void SphereOps::d_theta(std::span<const double> v, std::span<double> out,
                        AngularScheme scheme) const {
  if (scheme == AngularScheme::Spectral) {
    spectral_theta(v, out, 1);
    return;
  }
  // Centered differences; across a pole the neighbour is the antipodal
  // meridian node, with reversed orientation.
  const double dth = kPi / n_theta_;
  const int half = n_phi_ / 2;
  for (int k = 0; k < n_theta_; ++k) {
    for (int j = 0; j < n_phi_; ++j) {
      const int jo = (j + half) % n_phi_;
      const double up = (k + 1 < n_theta_) ? v[(k + 1) * n_phi_ + j] : v[k * n_phi_ + jo];
      const double dn = (k > 0) ? v[(k - 1) * n_phi_ + j] : v[k * n_phi_ + jo];
      out[k * n_phi_ + j] = (up - dn) / (2.0 * dth);
    }
  }
}

void SphereOps::d_theta2(std::span<const double> v, std::span<double> out,
                         AngularScheme scheme) const {
  if (scheme == AngularScheme::Spectral) {
    spectral_theta(v, out, 2);
    return;
  }
  const double dth = kPi / n_theta_;
  const int half = n_phi_ / 2;
  for (int k = 0; k < n_theta_; ++k) {
    for (int j = 0; j < n_phi_; ++j) {
      const int jo = (j + half) % n_phi_;
      const double c = v[k * n_phi_ + j];
      const double up = (k + 1 < n_theta_) ? v[(k + 1) * n_phi_ + j] : v[k * n_phi_ + jo];
      const double dn = (k > 0) ? v[(k - 1) * n_phi_ + j] : v[k * n_phi_ + jo];
      out[k * n_phi_ + j] = (up - 2.0 * c + dn) / (dth * dth);
    }
  }
}

void SphereOps::d_phi(std::span<const double> v, std::span<double> out,
                      AngularScheme scheme) const {
  if (scheme == AngularScheme::Spectral) {
    spectral_phi(v, out, 1);
    return;
  }
  const double dph = 2.0 * kPi / n_phi_;
  for (int k = 0; k < n_theta_; ++k) {
    for (int j = 0; j < n_phi_; ++j) {
      const double up = v[k * n_phi_ + (j + 1) % n_phi_];
      const double dn = v[k * n_phi_ + (j + n_phi_ - 1) % n_phi_];
      out[k * n_phi_ + j] = (up - dn) / (2.0 * dph);
    }
  }
}

void SphereOps::d_phi2(std::span<const double> v, std::span<double> out,
                       AngularScheme scheme) const {
  if (scheme == AngularScheme::Spectral) {
    spectral_phi(v, out, 2);
    return;
  }
  const double dph = 2.0 * kPi / n_phi_;
  for (int k = 0; k < n_theta_; ++k) {
    for (int j = 0; j < n_phi_; ++j) {
      const double c = v[k * n_phi_ + j];
      const double up = v[k * n_phi_ + (j + 1) % n_phi_];
      const double dn = v[k * n_phi_ + (j + n_phi_ - 1) % n_phi_];
      out[k * n_phi_ + j] = (up - 2.0 * c + dn) / (dph * dph);
    }
  }
}

void SphereOps::laplace_beltrami(std::span<const double> v, std::span<double> out,
                                 AngularScheme scheme) const {
  const std::size_t n = size();
  std::vector<double> pp(n);
  d_phi2(v, pp, scheme);
  if (scheme == AngularScheme::Spectral) {
    std::vector<double> t1(n), t2(n);
    d_theta(v, t1, scheme);
    d_theta2(v, t2, scheme);
    for (int k = 0; k < n_theta_; ++k) {
      const double th = theta(k);
      const double s = std::sin(th);
      const double cot = std::cos(th) / s;
      for (int j = 0; j < n_phi_; ++j) {
        const std::size_t i = k * n_phi_ + j;
        out[i] = t2[i] + cot * t1[i] + pp[i] / (s * s);
      }
    }
    return;
  }
  // Conservative form (1/sin) d_theta(sin d_theta v); the face at a pole
  // has sin = 0 and carries no flux.
  const double dth = kPi / n_theta_;
  for (int k = 0; k < n_theta_; ++k) {
    const double s = std::sin(theta(k));
    const double s_up = std::sin((k + 1) * dth);
    const double s_dn = std::sin(k * dth);
    for (int j = 0; j < n_phi_; ++j) {
      const std::size_t i = k * n_phi_ + j;
      const double c = v[i];
      const double up = (k + 1 < n_theta_) ? v[i + n_phi_] : c;
      const double dn = (k > 0) ? v[i - n_phi_] : c;
      const double flux = s_up * (up - c) - s_dn * (c - dn);
      out[i] = flux / (s * dth * dth) + pp[i] / (s * s);
    }
  }
}

void SphereOps::gradient(std::span<const double> v, std::span<double> g_theta,
                         std::span<double> g_phi, AngularScheme scheme) const {
  d_theta(v, g_theta, scheme);
  d_phi(v, g_phi, scheme);
  for (int k = 0; k < n_theta_; ++k) {
    const double s = std::sin(theta(k));
    for (int j = 0; j < n_phi_; ++j) g_phi[k * n_phi_ + j] /= s;
  }
}

double real_harmonic(int l, int m, const Vec3& w) {
  const double x = w[0], y = w[1], z = w[2];
  const double pi = kPi;
  switch (l) {
    case 0:
      return 0.5 / std::sqrt(pi);
    case 1: {
      const double c = std::sqrt(3.0 / (4.0 * pi));
      if (m == -1) return c * y;
      if (m == 0) return c * z;
      if (m == 1) return c * x;
      break;
    }
    case 2: {
      const double c = 0.5 * std::sqrt(15.0 / pi);
      if (m == -2) return c * x * y;
      if (m == -1) return c * y * z;
      if (m == 0) return 0.25 * std::sqrt(5.0 / pi) * (3.0 * z * z - 1.0);
      if (m == 1) return c * x * z;
      if (m == 2) return 0.5 * c * (x * x - y * y);
      break;
    }
    case 3: {
      if (m == -3) return 0.25 * std::sqrt(35.0 / (2.0 * pi)) * y * (3.0 * x * x - y * y);
      if (m == -2) return 0.5 * std::sqrt(105.0 / pi) * x * y * z;
      if (m == -1) return 0.25 * std::sqrt(21.0 / (2.0 * pi)) * y * (5.0 * z * z - 1.0);
      if (m == 0) return 0.25 * std::sqrt(7.0 / pi) * (5.0 * z * z * z - 3.0 * z);
      if (m == 1) return 0.25 * std::sqrt(21.0 / (2.0 * pi)) * x * (5.0 * z * z - 1.0);
      if (m == 2) return 0.25 * std::sqrt(105.0 / pi) * z * (x * x - y * y);
      if (m == 3) return 0.25 * std::sqrt(35.0 / (2.0 * pi)) * x * (x * x - 3.0 * y * y);
      break;
    }
    default:
      break;
  }
  throw std::invalid_argument("real_harmonic: need 0 <= l <= 3 and |m| <= l");
}

}  // namespace bicap
