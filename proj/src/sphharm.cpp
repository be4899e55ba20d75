#include "spincur/sphharm.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

namespace spincur::sphharm {

namespace {

constexpr double kPi = std::numbers::pi;

// P_l^m(z) = (1-z^2)^{m/2} q_{l,m}(z) for m >= 0; q is a polynomial in z,
// so it stays regular at the poles. Condon-Shortley phase is carried by
// q_{m,m} = (-1)^m (2m-1)!!. dq is the z-derivative, from the
// differentiated three-term recurrence.
void legendre_q(int l, int m, double z, double& q, double& dq) {
  double qmm = 1.0;
  for (int i = 1; i <= m; ++i) qmm *= -(2.0 * i - 1.0);
  if (l == m) {
    q = qmm;
    dq = 0.0;
    return;
  }
  double q0 = qmm, d0 = 0.0;                       // l' = m
  double q1 = (2.0 * m + 1.0) * z * qmm;           // l' = m+1
  double d1 = (2.0 * m + 1.0) * qmm;
  for (int ll = m + 2; ll <= l; ++ll) {
    const double a = (2.0 * ll - 1.0) / (ll - m);
    const double b = (ll + m - 1.0) / (ll - m);
    const double q2 = a * z * q1 - b * q0;
    const double d2 = a * (q1 + z * d1) - b * d0;
    q0 = q1;
    d0 = d1;
    q1 = q2;
    d1 = d2;
  }
  q = q1;
  dq = d1;
}

double ylm_norm(int l, int m) {
  // sqrt((2l+1)/(4pi) * (l-m)!/(l+m)!), m >= 0.
  double ratio = 1.0;
  for (int i = l - m + 1; i <= l + m; ++i) ratio *= i;
  return std::sqrt((2.0 * l + 1.0) / (4.0 * kPi) / ratio);
}

cplx ipow_xy(const Vec3& n, int m) {
  // (x + iy)^m, m >= 0.
  cplx w{1.0, 0.0};
  const cplx xy{n.x, n.y};
  for (int i = 0; i < m; ++i) w *= xy;
  return w;
}

void check_lm(int l, int m, const char* who) {
  if (l < 0 || std::abs(m) > l)
    throw std::invalid_argument(std::string(who) + ": need l >= 0 and |m| <= l");
}

// Gauss-Legendre nodes/weights on [-1,1], Newton iteration on P_n.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double xi = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 64; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * xi * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (xi * p0 - p1) / (xi * xi - 1.0);
      const double dx = p0 / pp;
      xi -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    x[i] = -xi;
    x[n - 1 - i] = xi;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - xi * xi) * pp * pp);
  }
}

}  // namespace

Direction Direction::from_angles(double theta, double phi) {
  const double st = std::sin(theta);
  return Direction({st * std::cos(phi), st * std::sin(phi), std::cos(theta)});
}

Direction Direction::from_unit(const Vec3& v) {
  if (std::abs(norm(v) - 1.0) > 1e-12)
    throw std::invalid_argument("Direction::from_unit: vector is not unit length");
  return Direction(v);
}

Direction Direction::normalized(const Vec3& v) {
  const double n = norm(v);
  if (n == 0.0) throw std::invalid_argument("Direction::normalized: zero vector");
  return Direction(v / n);
}

double Direction::theta() const { return std::acos(std::clamp(n_.z, -1.0, 1.0)); }

double Direction::phi() const {
  if (n_.x == 0.0 && n_.y == 0.0) return 0.0;
  return std::atan2(n_.y, n_.x);
}

Mat3 rotation_matrix(const EulerAngles& rho) {
  const double ca = std::cos(rho.alpha), sa = std::sin(rho.alpha);
  const double cb = std::cos(rho.beta), sb = std::sin(rho.beta);
  const double cg = std::cos(rho.gamma), sg = std::sin(rho.gamma);
  // Rz(alpha) Ry(beta) Rz(gamma), active.
  Mat3 r;
  r.m[0][0] = ca * cb * cg - sa * sg;
  r.m[0][1] = -ca * cb * sg - sa * cg;
  r.m[0][2] = ca * sb;
  r.m[1][0] = sa * cb * cg + ca * sg;
  r.m[1][1] = -sa * cb * sg + ca * cg;
  r.m[1][2] = sa * sb;
  r.m[2][0] = -sb * cg;
  r.m[2][1] = sb * sg;
  r.m[2][2] = cb;
  return r;
}

cplx ylm(int l, int m, const Direction& dir) {
  check_lm(l, m, "ylm");
  if (m < 0) {
    const cplx y = ylm(l, -m, dir);
    return (((-m) % 2) ? -1.0 : 1.0) * std::conj(y);
  }
  double q, dq;
  legendre_q(l, m, dir.z(), q, dq);
  return ylm_norm(l, m) * q * ipow_xy(dir.vec(), m);
}

std::vector<cplx> ylm_table(int l_max, const Direction& dir) {
  if (l_max < 0) throw std::invalid_argument("ylm_table: l_max must be >= 0");
  std::vector<cplx> table(lm_count(l_max));
  const double z = dir.z();
  const cplx xy{dir.x(), dir.y()};
  cplx w{1.0, 0.0};
  for (int m = 0; m <= l_max; ++m) {
    // q recurrence upward in l at fixed m.
    double qmm = 1.0;
    for (int i = 1; i <= m; ++i) qmm *= -(2.0 * i - 1.0);
    double q0 = qmm, q1 = (2.0 * m + 1.0) * z * qmm;
    for (int l = m; l <= l_max; ++l) {
      double q;
      if (l == m)
        q = q0;
      else if (l == m + 1)
        q = q1;
      else {
        const double a = (2.0 * l - 1.0) / (l - m);
        const double b = (l + m - 1.0) / (l - m);
        q = a * z * q1 - b * q0;
        q0 = q1;
        q1 = q;
      }
      const cplx y = ylm_norm(l, m) * q * w;
      table[lm_index(l, m)] = y;
      if (m > 0) table[lm_index(l, -m)] = ((m % 2) ? -1.0 : 1.0) * std::conj(y);
    }
    w *= xy;
  }
  return table;
}

CVec3 grad_ylm(int l, int m, const Direction& dir) {
  check_lm(l, m, "grad_ylm");
  if (m < 0) {
    const CVec3 g = grad_ylm(l, -m, dir);
    return (((-m) % 2) ? -1.0 : 1.0) * conj(g);
  }
  // Y restricted to the sphere extends off it as F = N q(z) (x+iy)^m, whose
  // Cartesian gradient is polynomial, hence pole-regular; the surface
  // gradient is the tangential projection of grad F.
  double q, dq;
  legendre_q(l, m, dir.z(), q, dq);
  const double nrm = ylm_norm(l, m);
  const cplx w = ipow_xy(dir.vec(), m);
  CVec3 g{};
  if (m > 0) {
    const cplx wm1 = ipow_xy(dir.vec(), m - 1);
    const cplx t = nrm * double(m) * q * wm1;
    g.x = t;
    g.y = t * cplx(0.0, 1.0);
  }
  g.z = nrm * dq * w;
  const cplx radial = cdot(dir.vec(), g);
  return g - radial * to_complex(dir.vec());
}

CVec3 rot_grad_ylm(int l, int m, const Direction& dir) {
  return cross(dir.vec(), grad_ylm(l, m, dir));
}

double gaunt(int l3, int m3, int l1, int m1, int l2, int m2) {
  check_lm(l3, m3, "gaunt");
  check_lm(l1, m1, "gaunt");
  check_lm(l2, m2, "gaunt");
  if (m3 != m1 + m2) return 0.0;
  if (l3 < std::abs(l1 - l2) || l3 > l1 + l2) return 0.0;
  if ((l1 + l2 + l3) % 2 != 0) return 0.0;

  using Key = std::tuple<int, int, int, int, int, int>;
  static std::map<Key, double> cache;
  static std::mutex mtx;
  const Key key{l3, m3, l1, m1, l2, m2};
  {
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }

  // Direct quadrature; the triple product is band-limited by l1+l2+l3,
  // so the grid integrates it exactly.
  const SphereGrid grid = sphere_grid(l1 + l2 + l3);
  cplx acc{};
  for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
    const Direction& d = grid.nodes[i];
    acc += grid.weights[i] * std::conj(ylm(l3, m3, d)) * ylm(l1, m1, d) * ylm(l2, m2, d);
  }
  const double value = acc.real();
  {
    std::lock_guard<std::mutex> lock(mtx);
    cache.emplace(key, value);
  }
  return value;
}

SphereGrid sphere_grid(int band) {
  if (band < 0) throw std::invalid_argument("sphere_grid: band must be >= 0");
  const int n_theta = band + 1;
  const int n_phi = 2 * band + 1;
  std::vector<double> ct, wt;
  gauss_legendre(n_theta, ct, wt);

  SphereGrid g;
  g.band = band;
  g.nodes.reserve(static_cast<std::size_t>(n_theta) * n_phi);
  g.weights.reserve(g.nodes.capacity());
  const double wphi = 2.0 * kPi / n_phi;
  for (int i = 0; i < n_theta; ++i) {
    const double z = ct[i];
    const double st = std::sqrt(std::max(0.0, 1.0 - z * z));
    for (int j = 0; j < n_phi; ++j) {
      const double phi = wphi * j;
      g.nodes.push_back(
          Direction::from_unit({st * std::cos(phi), st * std::sin(phi), z}));
      g.weights.push_back(wt[i] * wphi);
    }
  }
  return g;
}

EulerGrid euler_grid(int band) {
  if (band < 0) throw std::invalid_argument("euler_grid: band must be >= 0");
  const int n_beta = band + 1;
  const int n_ag = 2 * band + 1;
  std::vector<double> cb, wb;
  gauss_legendre(n_beta, cb, wb);

  EulerGrid g;
  g.band = band;
  g.nodes.reserve(static_cast<std::size_t>(n_ag) * n_beta * n_ag);
  g.weights.reserve(g.nodes.capacity());
  const double step = 2.0 * kPi / n_ag;
  // Normalized measure: (1/8pi^2) da sin(b) db dg; the angular steps and the
  // Gauss-Legendre weights in cos(b) combine to step^2 * wb / (8pi^2).
  for (int ia = 0; ia < n_ag; ++ia) {
    const double alpha = step * ia;
    for (int ib = 0; ib < n_beta; ++ib) {
      const double beta = std::acos(std::clamp(cb[ib], -1.0, 1.0));
      const double w = wb[ib] * step * step / (8.0 * kPi * kPi);
      for (int ig = 0; ig < n_ag; ++ig) {
        g.nodes.push_back({alpha, beta, step * ig});
        g.weights.push_back(w);
      }
    }
  }
  return g;
}

}  // namespace spincur::sphharm
