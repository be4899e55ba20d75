#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "spincur/currents.hpp"
#include "spincur/oracle.hpp"
#include "testutil.hpp"

using namespace spincur;
using namespace spincur::oracle;
using currents::current_set;
using currents::CurrentSet;
using currents::integrand_band;
using currents::PhotonField;
using dipole::Axis;
using dipole::PartialWaveDipole;
using dipole::random_dipole;
using dipole::Spin;
using sphharm::Direction;
using sphharm::euler_grid;
using sphharm::rotation_matrix;
using sphharm::sphere_grid;
using testutil::kPi;

namespace {

double rel_dev(const Vec3& a, const Vec3& b) {
  const double scale = std::max(norm(a), norm(b));
  if (scale < 1e-300) return 0.0;
  return norm(a - b) / scale;
}

}  // namespace

TEST_CASE("rate_molecular: projector limits") {
  PartialWaveDipole d = random_dipole(5, 2, 1.0);
  // Empty the spin-down channel.
  for (Axis q : dipole::kAxes)
    for (int l = 0; l <= 2; ++l)
      for (int m = -l; m <= l; ++m) d.c(q, Spin::down, l, m) = 0.0;

  const PhotonField ph = PhotonField::circular(1.0, +1);
  const sphharm::EulerAngles rho{0.9, 1.7, 0.3};
  const Direction k_mol = Direction::from_angles(1.1, 2.5);
  const Vec3 zeta_lab = rotation_matrix(rho) * Vec3{0, 0, 1};
  const CVec3 d_lab = rotation_matrix(rho) * d.evaluate(Spin::up, k_mol);
  const double amp = std::norm(cdot(d_lab, ph.E));

  // Detection aligned with the rotated quantization axis: full weight.
  CHECK(rate_molecular(d, ph, zeta_lab, rho, k_mol) == doctest::Approx(amp).epsilon(1e-13));
  // Anti-aligned: the channel is projected out entirely.
  CHECK(rate_molecular(d, ph, -zeta_lab, rho, k_mol) == doctest::Approx(0.0).epsilon(1e-15));

  // Orthogonal detection axis: the unpolarized half-sum.
  Vec3 s_perp = cross(zeta_lab, Vec3{0.13, -0.7, 0.59});
  s_perp = s_perp / norm(s_perp);
  CHECK(rate_molecular(d, ph, s_perp, rho, k_mol) == doctest::Approx(0.5 * amp).epsilon(1e-13));
}

TEST_CASE("rate_molecular is nonnegative everywhere") {
  const PartialWaveDipole d = random_dipole(14, 2, 1.0);
  const PhotonField ph = PhotonField::circular(1.3, -1);
  const auto eg = euler_grid(3);
  const auto kg = sphere_grid(4);
  testutil::Rng rng(6);
  double scale = 0.0;
  for (int i = 0; i < 40; ++i) {
    const auto& rho = eg.nodes[(i * 131) % eg.nodes.size()];
    const auto& kd = kg.nodes[(i * 17) % kg.nodes.size()];
    const double w = rate_molecular(d, ph, rng.unit_vec(), rho, kd);
    scale = std::max(scale, std::abs(w));
    CHECK(w >= -1e-12 * std::max(scale, 1.0));
  }
}

TEST_CASE("oracle_current: zero dipole gives zero") {
  PartialWaveDipole zero(1.0, 1);
  const Vec3 j = oracle_current(zero, PhotonField::circular(1.0, +1), {0, 0, 1},
                                sphere_grid(4), euler_grid(4), true);
  CHECK(norm(j) == 0.0);
}

TEST_CASE("completeness: conditioned oracle equals the sum of the three spin currents") {
  const PartialWaveDipole d = random_dipole(7, 2, 1.0);
  const auto kg = sphere_grid(integrand_band(2));
  const auto eg = euler_grid(euler_band_for_current());
  const Vec3 axes[] = {Vec3{0.6, -0.48, 0.64}, Vec3{-0.28, 0.96, 0.0}, Vec3{0.32, 0.24, 0.9168}};
  for (int xi : {+1, -1}) {
    const PhotonField ph = PhotonField::circular(1.0, xi);
    for (Vec3 s : axes) {
      s = s / norm(s);
      const Vec3 o = oracle_current(d, ph, s, kg, eg, true);
      const CurrentSet cs = current_set(d, ph, Direction::normalized(s), kg);
      CHECK(rel_dev(o, cs.j_cross + cs.j_par + cs.j_perp) < 1e-9);
    }
  }
}

TEST_CASE("convergence plateau: doubling grid orders changes nothing") {
  const PartialWaveDipole d = random_dipole(8, 2, 1.0);
  const PhotonField ph = PhotonField::circular(1.0, +1);
  const Vec3 s{1, 0, 0};
  const Vec3 a =
      oracle_current(d, ph, s, sphere_grid(integrand_band(2)), euler_grid(4), true);
  const Vec3 b =
      oracle_current(d, ph, s, sphere_grid(2 * integrand_band(2)), euler_grid(8), true);
  CHECK(rel_dev(a, b) < 1e-12);
}

TEST_CASE("frame consistency: rotating field and detector rotates the currents") {
  const PartialWaveDipole d = random_dipole(9, 2, 1.0);
  const auto kg = sphere_grid(integrand_band(2));
  const auto eg = euler_grid(euler_band_for_current());
  const Mat3 r0 = rotation_matrix({0.8, 0.5, 1.9});

  const PhotonField ph = PhotonField::circular(1.0, +1);
  const PhotonField ph_rot{r0 * ph.E, ph.xi, ph.omega_label};
  Vec3 s{0.6, -0.48, 0.64};
  s = s / norm(s);
  const Vec3 s_rot = r0 * s;

  for (bool conditioned : {false, true}) {
    const Vec3 j = oracle_current(d, ph, s, kg, eg, conditioned);
    const Vec3 j_rot = oracle_current(d, ph_rot, s_rot, kg, eg, conditioned);
    CHECK(rel_dev(j_rot, r0 * j) < 1e-10);
  }
}

TEST_CASE("a_coefficients: spin dependence is linear, total-rate bookkeeping") {
  const PartialWaveDipole d = random_dipole(7, 2, 1.0);
  const PhotonField ph = PhotonField::circular(1.0, +1);
  const int l_max = d.l_max();
  const auto kg = sphere_grid(2 * l_max + 2);
  const auto sg = sphere_grid(3);
  const auto eg = euler_grid(euler_band_for_a(l_max));
  const ATable a = a_coefficients(d, ph, kg, sg, eg, 2, 2);

  const double scale = std::abs(a.at(0, 0, 0, 0));
  CHECK(scale > 0.0);
  // The rate is linear in the spin axis: everything with ls >= 2 vanishes.
  for (int l = 0; l <= 2; ++l)
    for (int ml = -l; ml <= l; ++ml)
      for (int ms = -2; ms <= 2; ++ms) CHECK(std::abs(a.at(l, ml, 2, ms)) < 1e-12 * scale);

  // Plain-measure triple integral of the rate is 4 pi times the (0,0;0,0)
  // coefficient, and the normalized yield matches the analytic one.
  const double n_oracle = oracle_total_yield(d, ph, kg, sg, eg);
  CHECK(std::abs(4.0 * kPi * a.at(0, 0, 0, 0).real() - 4.0 * kPi * n_oracle) <
        1e-10 * std::abs(4.0 * kPi * n_oracle));
  const double n_analytic = currents::total_yield(d, ph, kg);
  CHECK(std::abs(n_oracle - n_analytic) < 1e-10 * n_analytic);
  CHECK(std::abs(a.at(0, 0, 0, 0).real() - n_analytic) < 1e-10 * n_analytic);

  // A^{0,0}_{0,0} of a real rate is real.
  CHECK(std::abs(a.at(0, 0, 0, 0).imag()) < 1e-12 * scale);
}

TEST_CASE("a_coefficients: current proportionalities are stable across dipoles") {
  const PhotonField ph = PhotonField::circular(1.0, +1);
  cplx r_pecd_ref{}, r_cross_ref{};
  for (std::uint64_t seed : {7u, 8u, 9u}) {
    const PartialWaveDipole d = random_dipole(seed, 2, 1.0);
    const auto kg = sphere_grid(2 * d.l_max() + 2);
    const auto sg = sphere_grid(2);
    const auto eg = euler_grid(euler_band_for_a(d.l_max()));
    const ATable a = a_coefficients(d, ph, kg, sg, eg, 1, 1);
    const CurrentSet cs =
        current_set(d, ph, Direction::normalized({1, 0, 1}), kg);

    const cplx r_pecd = cplx(cs.m_pecd) / a.at(1, 0, 0, 0);
    const cplx diff = a.at(1, 1, 1, -1) - a.at(1, -1, 1, 1);
    const cplx r_cross = cplx(cs.m_cross) / diff;
    if (seed == 7u) {
      r_pecd_ref = r_pecd;
      r_cross_ref = r_cross;
    } else {
      CHECK(std::abs(r_pecd - r_pecd_ref) < 1e-8 * std::abs(r_pecd_ref));
      CHECK(std::abs(r_cross - r_cross_ref) < 1e-8 * std::abs(r_cross_ref));
    }
  }
}
