#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spincur/sphharm.hpp"
#include "spincur/vec3.hpp"

// Spin-resolved partial-wave photoionization dipoles: construction from
// channel models, ingestion from coefficient files, pointwise evaluation,
// and the mirror-image (enantiomer) transformation.
namespace spincur::dipole {

using sphharm::Direction;
using sphharm::SphereGrid;

enum class Spin { up = 0, down = 1 };  // projections +1/2 and -1/2

inline int spin_sign(Spin mu) { return mu == Spin::up ? +1 : -1; }
inline double spin_value(Spin mu) { return 0.5 * spin_sign(mu); }
constexpr Spin kSpins[2] = {Spin::up, Spin::down};

// Cartesian component index.
enum class Axis { x = 0, y = 1, z = 2 };
constexpr Axis kAxes[3] = {Axis::x, Axis::y, Axis::z};

// D_mu(k_hat) = sum_{l,m} c[q][mu][l][m] Y_{l,m}(k_hat) per Cartesian
// component q, at fixed photoelectron wavenumber k.
class PartialWaveDipole {
 public:
  PartialWaveDipole(double k, int l_max, std::string label = "");

  double k() const { return k_; }
  int l_max() const { return l_max_; }
  const std::string& label() const { return label_; }

  cplx& c(Axis q, Spin mu, int l, int m);
  const cplx& c(Axis q, Spin mu, int l, int m) const;

  // D_mu(dir) as a complex Cartesian 3-vector.
  CVec3 evaluate(Spin mu, const Direction& dir) const;

  // Evaluation at every node of a grid, node order preserved.
  std::vector<CVec3> evaluate_nodes(Spin mu, const SphereGrid& grid) const;

 private:
  std::size_t index(Axis q, Spin mu, int l, int m) const;
  double k_;
  int l_max_;
  std::string label_;
  std::vector<cplx> coef_;
};

// Mirror image: c'[q][mu][l][m] = -(-1)^l c[q][mu][l][m], so that
// evaluate(enantiomer(d), mu, k) = -evaluate(d, mu, -k) exactly.
PartialWaveDipole enantiomer(const PartialWaveDipole& d);

// Reproducible test dipole; both spin channels populated and distinct.
// Stream: mt19937_64(seed), coefficients in (q, mu, l, m) order, each
// re then im drawn as ((u >> 11) * 2^-53) * 2 - 1 in [-1, 1).
PartialWaveDipole random_dipole(std::uint64_t seed, int l_max, double k);

// One bound orbital component and its dipole-allowed continuum channels.
// tau absorbs radial integrals and continuum phases.
struct BoundComponent {
  int l = 0;
  int m = 0;
  Spin mu = Spin::up;
  cplx amplitude{1.0, 0.0};
  std::vector<std::pair<int, cplx>> channels;  // (l', tau_{l'})
};

// Two-component mixed bound state: the first component is weighted by
// cos(phi_mix), the second by sign*sin(phi_mix) (real mixing) or
// sign*i*sin(phi_mix) (imaginary mixing). Components beyond the second
// carry weight 1.
struct ChannelSpec {
  enum class Mixing { real_sum, imag_sum };  // "p" and "c" families
  std::vector<BoundComponent> components;
  double phi_mix = 0.0;
  Mixing mixing = Mixing::real_sum;
  int sign = +1;
};

PartialWaveDipole channel_dipole(const ChannelSpec& spec, double k);

// Coefficient file: UTF-8 CSV with header "k,q,mu,l,m,re,im";
// q in {x,y,z}, mu in {+0.5,-0.5}. Multiple k blocks define a scan.
PartialWaveDipole load_dipole(const std::string& path);
std::vector<PartialWaveDipole> load_dipole_scan(const std::string& path);
void save_dipole(const PartialWaveDipole& d, const std::string& path);
void save_dipole_scan(const std::vector<PartialWaveDipole>& scan, const std::string& path);

}  // namespace spincur::dipole
