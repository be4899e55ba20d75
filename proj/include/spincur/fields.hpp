#pragma once

#include <vector>

#include "spincur/dipole.hpp"
#include "spincur/sphharm.hpp"

// Geometric propensity fields on the energy shell and their multipole
// taxonomy: net vector, net radial flux, and the (l,m) moments of the
// longitudinal and transverse components.
namespace spincur::fields {

using dipole::PartialWaveDipole;
using dipole::Spin;
using sphharm::Direction;
using sphharm::SphereGrid;

// i D* x D. The imaginary residue (analytically zero) must stay below
// 1e-12 * |D|^2; it is checked and discarded.
Vec3 propensity(const CVec3& d);

// Per-node propensity fields of one dipole: both spin channels plus the
// half-sum and half-difference combinations.
struct PropensityFieldSamples {
  SphereGrid grid;
  double k = 0.0;
  std::vector<Vec3> b_up, b_down;   // spin +1/2, -1/2
  std::vector<Vec3> b_sym, b_anti;  // (up +- down)/2
};

// Requires grid.band >= 2 * d.l_max().
PropensityFieldSamples field_samples(const PartialWaveDipole& d, const SphereGrid& grid);

enum class FieldSelect { sym, anti, up, down };

const std::vector<Vec3>& select(const PropensityFieldSamples& f, FieldSelect which);

// Moments over the unit shell; all integrals use the unit-sphere measure and
// the unit-sphere surface gradient, with k powers kept by the caller.
// The projections use Y_{l,m} unconjugated, so moments of a real field obey
// M_{l,-m} = (-1)^m conj(M_{l,m}).
struct MultipoleSet {
  Vec3 omega;           // integral of B
  double b_par = 0.0;   // integral of k_hat . B
  int l_report = 0;
  std::vector<cplx> b_par_lm;    // (k_hat . B) against Y_{l,m}
  std::vector<cplx> b_perp1_lm;  // B against grad Y_{l,m}
  std::vector<cplx> b_perp2_lm;  // B against (k_hat x grad) Y_{l,m}

  const cplx& par(int l, int m) const { return b_par_lm[sphharm::lm_index(l, m)]; }
  const cplx& perp1(int l, int m) const { return b_perp1_lm[sphharm::lm_index(l, m)]; }
  const cplx& perp2(int l, int m) const { return b_perp2_lm[sphharm::lm_index(l, m)]; }
};

MultipoleSet moments(const PropensityFieldSamples& f, FieldSelect which, int l_report);

}  // namespace spincur::fields
