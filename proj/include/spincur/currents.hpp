#pragma once

#include <string>

#include "spincur/dipole.hpp"
#include "spincur/fields.hpp"
#include "spincur/sphharm.hpp"

// Closed-form orientation-averaged observables for one-photon ionization of
// an isotropic ensemble: the circular-dichroism current, the three
// spin-conditioned currents, and the total yield. Conventions: light
// propagates along lab z; each molecular factor carries one explicit power
// of the wavenumber k; all shell integrals run over the unit sphere.
namespace spincur::currents {

using dipole::PartialWaveDipole;
using dipole::Spin;
using sphharm::Direction;
using sphharm::SphereGrid;

// Complex polarization vector with helicity bookkeeping. The derived photon
// spin vector is Xi = -i (E* x E), real for any E; for circular polarization
// E = E0 (x + i xi y)/sqrt(2) it equals xi |E0|^2 z.
struct PhotonField {
  CVec3 E;
  int xi = +1;
  std::string omega_label;

  static PhotonField circular(double amplitude, int xi, std::string omega_label = "");

  double intensity() const { return norm2(E); }  // |E|^2
  Vec3 photon_spin() const;                      // Xi
};

// Spin quantization axis in the molecular frame: +z for mu = +1/2, -z for
// mu = -1/2. The fixed axis used inside the spin-weight integrands is the
// mu = +1/2 one.
inline Vec3 spin_quantization_axis(Spin mu) {
  return {0.0, 0.0, double(dipole::spin_sign(mu))};
}

// Sufficient quadrature band for every current integrand of a dipole with
// the given l_max.
inline int integrand_band(int l_max) { return 2 * l_max + 2; }

struct CurrentResult {
  Vec3 j;         // lab-frame current vector
  double factor;  // molecular scalar factor (carries one power of k)
};

// Net current: [ (1/6) integral k (k_hat . B_sym) ] Xi.
CurrentResult pecd_current(const PartialWaveDipole& d, const PhotonField& ph,
                           const SphereGrid& grid);

// In-plane vortex current:
// [ (1/12) integral k sigma_+ . (B_anti x k_hat) ] (s x Xi).
CurrentResult j_cross(const PartialWaveDipole& d, const PhotonField& ph, const Direction& s,
                      const SphereGrid& grid);

// Combined spin-weight integrand: the product of the spin-up/down yield
// difference with k . sigma_+, with the division by k . sigma_+ cancelled
// algebraically, so it is finite on the whole sphere:
//   I^(L)(k_hat) = sum_mu sgn(2 mu) [ |D_mu|^2 k (k_hat . sigma_+)
//                  - (k/L) Re( (D_mu . k_hat)(conj(D_mu) . sigma_+) ) ].
double spin_weight_integrand(const PartialWaveDipole& d, double lambda, const Direction& k_hat);

// Raw per-channel geometry weight (diagnostic only); rejects directions with
// |k_hat . sigma_+| < 1e-10 where the defining ratio is singular.
double spin_weight_raw(const PartialWaveDipole& d, double lambda, Spin mu,
                       const Direction& k_hat);

// Longitudinal spin current: [ (1/15) integral I^(2) ] |E|^2 (s . z) z.
CurrentResult j_parallel(const PartialWaveDipole& d, const PhotonField& ph, const Direction& s,
                         const SphereGrid& grid);

// In-plane spin current: [ (1/20) integral I^(-3) ] |E|^2 (s - (s . z) z).
CurrentResult j_perp(const PartialWaveDipole& d, const PhotonField& ph, const Direction& s,
                     const SphereGrid& grid);

// Total yield N = (1/6) (sum_mu integral |D_mu|^2) |E|^2.
double total_yield(const PartialWaveDipole& d, const PhotonField& ph, const SphereGrid& grid);

struct CurrentSet {
  Vec3 j_pecd, j_cross, j_par, j_perp;
  double m_pecd = 0.0, m_cross = 0.0, m_par = 0.0, m_perp = 0.0;
  double yield = 0.0;
  // Normalized magnitudes |j|/N; NaN when the yield vanishes.
  double jn_pecd = 0.0, jn_cross = 0.0, jn_par = 0.0, jn_perp = 0.0;
  // Input echo.
  Vec3 s_axis;
  int xi = +1;
  double k = 0.0;
};

CurrentSet current_set(const PartialWaveDipole& d, const PhotonField& ph, const Direction& s,
                       const SphereGrid& grid);

}  // namespace spincur::currents
