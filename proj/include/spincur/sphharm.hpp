#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "spincur/vec3.hpp"

// Angular-momentum and quadrature foundation: complex spherical harmonics
// (Condon-Shortley phase), their tangential derivatives, Gaunt coefficients,
// active z-y-z Euler rotations, and band-exact integration grids on the
// sphere and on the rotation group.
namespace spincur::sphharm {

// Unit vector on the sphere.
class Direction {
 public:
  // theta in [0,pi], phi arbitrary (radians).
  static Direction from_angles(double theta, double phi);
  // Requires |v| = 1 within 1e-12.
  static Direction from_unit(const Vec3& v);
  // Normalizes v; throws on |v| = 0.
  static Direction normalized(const Vec3& v);

  const Vec3& vec() const { return n_; }
  double x() const { return n_.x; }
  double y() const { return n_.y; }
  double z() const { return n_.z; }
  double theta() const;
  double phi() const;

 private:
  explicit Direction(const Vec3& v) : n_(v) {}
  Vec3 n_;
};

// Active z-y-z convention: R(alpha,beta,gamma) = Rz(alpha) Ry(beta) Rz(gamma).
struct EulerAngles {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
};

Mat3 rotation_matrix(const EulerAngles& rho);

// Flat (l,m) index, l^2 + l + m.
inline int lm_index(int l, int m) { return l * l + l + m; }
inline int lm_count(int l_max) { return (l_max + 1) * (l_max + 1); }

// Orthonormal complex spherical harmonic, Condon-Shortley phase.
cplx ylm(int l, int m, const Direction& dir);

// All Y_{l,m} with l <= l_max at one direction, indexed by lm_index.
std::vector<cplx> ylm_table(int l_max, const Direction& dir);

// Surface gradient of Y_{l,m} on the unit sphere (tangential, no radial part).
CVec3 grad_ylm(int l, int m, const Direction& dir);

// Rotational companion k x grad Y_{l,m}.
CVec3 rot_grad_ylm(int l, int m, const Direction& dir);

// Integral of conj(Y_{l3,m3}) Y_{l1,m1} Y_{l2,m2} over the sphere.
// Exact zeros when a selection rule fails (m3 != m1+m2, triangle rule,
// odd l1+l2+l3). Values are cached.
double gaunt(int l3, int m3, int l1, int m1, int l2, int m2);

// Quadrature grid on the sphere, exact for integrands of harmonic degree
// <= band. Gauss-Legendre in cos(theta), uniform in phi; sum of weights 4pi.
struct SphereGrid {
  std::vector<Direction> nodes;
  std::vector<double> weights;
  int band = 0;
};

// Quadrature grid on Euler angles with the normalized measure
// (1/8pi^2) da sin(b) db dg; exact for Wigner band <= band; weights sum to 1.
struct EulerGrid {
  std::vector<EulerAngles> nodes;
  std::vector<double> weights;
  int band = 0;
};

SphereGrid sphere_grid(int band);
EulerGrid euler_grid(int band);

// Weighted sum over grid nodes, fixed accumulation order.
template <class T>
T integrate_sphere(std::span<const T> samples, const SphereGrid& grid) {
  if (samples.size() != grid.nodes.size())
    throw std::invalid_argument("integrate_sphere: sample count does not match grid");
  T acc{};
  for (std::size_t i = 0; i < samples.size(); ++i) acc += grid.weights[i] * samples[i];
  return acc;
}

template <class T>
T integrate_euler(std::span<const T> samples, const EulerGrid& grid) {
  if (samples.size() != grid.nodes.size())
    throw std::invalid_argument("integrate_euler: sample count does not match grid");
  T acc{};
  for (std::size_t i = 0; i < samples.size(); ++i) acc += grid.weights[i] * samples[i];
  return acc;
}

}  // namespace spincur::sphharm
