#pragma once

#include <vector>

#include "spincur/currents.hpp"
#include "spincur/dipole.hpp"
#include "spincur/sphharm.hpp"

// Brute-force, convention-independent reference: evaluates the molecular
// frame spin-conditioned rate pointwise, averages over orientations by exact
// quadrature, and extracts net lab-frame currents and the expansion
// coefficients of the orientation-averaged rate. Never reuses the analytic
// closed forms; dipole 3-vectors are rotated numerically per Euler node.
namespace spincur::oracle {

using currents::PhotonField;
using dipole::PartialWaveDipole;
using dipole::Spin;
using sphharm::Direction;
using sphharm::EulerAngles;
using sphharm::EulerGrid;
using sphharm::SphereGrid;

// Rate for one orientation:
// (1/2) sum_mu |(R D_mu(k_mol)) . E|^2 (1 + s . (2 mu) R z_mol).
double rate_molecular(const PartialWaveDipole& d, const PhotonField& ph, const Vec3& s,
                      const EulerAngles& rho, const Direction& k_mol);

// Net lab-frame current: integral over molecular emission directions and
// orientations of (k R k_hat) times either the spin-independent half of the
// rate (spin_conditioned = false) or the spin-projection half
// (spin_conditioned = true).
Vec3 oracle_current(const PartialWaveDipole& d, const PhotonField& ph, const Vec3& s,
                    const SphereGrid& k_grid, const EulerGrid& e_grid, bool spin_conditioned);

// Rotation-factor band of the current integrand; independent of l_max.
inline int euler_band_for_current() { return 4; }

// Expansion coefficients A^{l,ml}_{ls,ms} of the orientation-averaged rate
// W(k_lab, s) over products Y_{l,ml}(k_lab) Y_{ls,ms}(s). The k argument of
// the expansion is the lab-frame emission direction.
struct ATable {
  int l_k = 0;
  int l_s = 0;
  std::vector<cplx> a;  // index (l^2+l+ml) * (l_s+1)^2 + (ls^2+ls+ms)

  const cplx& at(int l, int ml, int ls, int ms) const {
    return a[std::size_t(sphharm::lm_index(l, ml)) * sphharm::lm_count(l_s) +
             sphharm::lm_index(ls, ms)];
  }
};

// Grid requirements: k_grid band >= 2 l_max + l_k, s_grid band >= 1 + l_s,
// e_grid band >= 2 l_max + 3 (the lab-frame k argument folds the dipole band
// into the orientation dependence).
ATable a_coefficients(const PartialWaveDipole& d, const PhotonField& ph,
                      const SphereGrid& k_grid, const SphereGrid& s_grid,
                      const EulerGrid& e_grid, int l_k, int l_s);

inline int euler_band_for_a(int l_max) { return 2 * l_max + 3; }

// Triple quadrature of the rate with the spin-detection average normalized
// to 1 (so the result matches the analytic total yield; the plain-measure
// spin integral is this value times 4pi).
double oracle_total_yield(const PartialWaveDipole& d, const PhotonField& ph,
                          const SphereGrid& k_grid, const SphereGrid& s_grid,
                          const EulerGrid& e_grid);

}  // namespace spincur::oracle
