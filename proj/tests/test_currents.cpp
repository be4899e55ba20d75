#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "spincur/currents.hpp"
#include "spincur/oracle.hpp"
#include "testutil.hpp"

using namespace spincur;
using namespace spincur::currents;
using dipole::Axis;
using dipole::PartialWaveDipole;
using dipole::random_dipole;
using sphharm::Direction;
using sphharm::euler_grid;
using sphharm::sphere_grid;
using sphharm::SphereGrid;
using testutil::kPi;

namespace {

double rel_dev(const Vec3& a, const Vec3& b) {
  const double scale = std::max(norm(a), norm(b));
  if (scale < 1e-300) return 0.0;
  return norm(a - b) / scale;
}

}  // namespace

TEST_CASE("photon field: circular polarization invariants") {
  for (int xi : {+1, -1}) {
    const PhotonField ph = PhotonField::circular(2.0, xi);
    CHECK(ph.intensity() == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(testutil::vdiff(ph.photon_spin(), {0.0, 0.0, xi * 4.0}) < 1e-12);
  }
  CHECK_THROWS_AS(PhotonField::circular(1.0, 0), std::invalid_argument);

  // Xi is real for arbitrary complex E by construction; spot-check one.
  const PhotonField gen{{cplx(0.4, 1.2), cplx(-0.3, 0.5), cplx(0.1, -0.9)}, +1, ""};
  const Vec3 xi_vec = gen.photon_spin();
  CHECK(std::isfinite(norm(xi_vec)));
}

TEST_CASE("pecd_current: single-component dipole gives zero, helicity flips sign") {
  PartialWaveDipole d(1.0, 2);
  d.c(Axis::z, dipole::Spin::up, 1, 0) = cplx(0.3, 0.7);
  d.c(Axis::z, dipole::Spin::down, 2, 1) = cplx(-0.2, 0.4);
  const SphereGrid g = sphere_grid(integrand_band(2));
  const PhotonField ph = PhotonField::circular(1.0, +1);
  const CurrentResult r = pecd_current(d, ph, g);
  CHECK(norm(r.j) < 1e-16);
  CHECK(std::abs(r.factor) < 1e-16);

  const PartialWaveDipole rd = random_dipole(7, 2, 1.0);
  const CurrentResult plus = pecd_current(rd, PhotonField::circular(1.0, +1), g);
  const CurrentResult minus = pecd_current(rd, PhotonField::circular(1.0, -1), g);
  CHECK(plus.factor == minus.factor);
  CHECK(testutil::vdiff(plus.j, -minus.j) == 0.0);
}

TEST_CASE("j_cross vanishes for axial spin detection or identical channels") {
  const PartialWaveDipole d = random_dipole(7, 2, 1.0);
  const SphereGrid g = sphere_grid(integrand_band(2));
  const PhotonField ph = PhotonField::circular(1.0, +1);
  const CurrentResult axial = j_cross(d, ph, Direction::from_unit({0, 0, 1}), g);
  CHECK(norm(axial.j) == 0.0);  // s x Xi = 0

  PartialWaveDipole same = random_dipole(9, 2, 1.0);
  for (Axis q : dipole::kAxes)
    for (int l = 0; l <= 2; ++l)
      for (int m = -l; m <= l; ++m)
        same.c(q, dipole::Spin::down, l, m) = same.c(q, dipole::Spin::up, l, m);
  const CurrentResult nulled = j_cross(same, ph, Direction::from_unit({1, 0, 0}), g);
  CHECK(std::abs(nulled.factor) < 1e-16);
}

TEST_CASE("j_cross direction: s = x and positive helicity point along -y") {
  const PartialWaveDipole d = random_dipole(7, 2, 1.0);
  const SphereGrid g = sphere_grid(integrand_band(2));
  const PhotonField ph = PhotonField::circular(1.0, +1);
  const CurrentResult r = j_cross(d, ph, Direction::from_unit({1, 0, 0}), g);
  CHECK(std::abs(r.j.x) == 0.0);
  CHECK(std::abs(r.j.z) == 0.0);
  CHECK(r.j.y == -r.factor * ph.intensity());
}

TEST_CASE("spin_weight_integrand: cancellations and two-step consistency") {
  // Fixed-axis dipole along y evaluated at k = x: both terms vanish.
  PartialWaveDipole d(1.0, 1);
  d.c(Axis::y, dipole::Spin::up, 1, 1) = cplx(0.4, 0.2);
  d.c(Axis::y, dipole::Spin::up, 1, -1) = cplx(0.1, -0.3);
  const Direction kx = Direction::from_unit({1, 0, 0});
  CHECK(std::abs(spin_weight_integrand(d, 2.0, kx)) < 1e-16);

  // Identical spin channels cancel in the signed sum.
  PartialWaveDipole same = random_dipole(3, 2, 1.0);
  for (Axis q : dipole::kAxes)
    for (int l = 0; l <= 2; ++l)
      for (int m = -l; m <= l; ++m)
        same.c(q, dipole::Spin::down, l, m) = same.c(q, dipole::Spin::up, l, m);
  testutil::Rng rng(2);
  for (int trial = 0; trial < 10; ++trial)
    CHECK(std::abs(spin_weight_integrand(same, -3.0, Direction::from_unit(rng.unit_vec()))) <
          1e-15);

  // Against the raw two-step route at a regular point.
  const PartialWaveDipole rd = random_dipole(7, 2, 1.0);
  const Direction khat = Direction::from_angles(0.7, 1.9);
  for (double lambda : {2.0, -3.0}) {
    const double r_up = spin_weight_raw(rd, lambda, dipole::Spin::up, khat);
    const double r_down = spin_weight_raw(rd, lambda, dipole::Spin::down, khat);
    const double w =
        r_up * norm2(rd.evaluate(dipole::Spin::up, khat)) -
        r_down * norm2(rd.evaluate(dipole::Spin::down, khat));
    const double helicity = rd.k() * dot(khat.vec(), spin_quantization_axis(dipole::Spin::up));
    CHECK(std::abs(spin_weight_integrand(rd, lambda, khat) - w * helicity) < 1e-12);
  }
  CHECK_THROWS_AS(spin_weight_integrand(rd, 0.0, khat), std::invalid_argument);
  CHECK_THROWS_AS(spin_weight_raw(rd, 2.0, dipole::Spin::up, kx), std::invalid_argument);
}

TEST_CASE("spin_weight_integrand stays finite on the equator") {
  const PartialWaveDipole d = random_dipole(17, 3, 1.0);
  for (int i = 0; i < 12; ++i) {
    const Direction eq = Direction::from_angles(kPi / 2.0, i * 0.5);
    CHECK(std::isfinite(spin_weight_integrand(d, 2.0, eq)));
    CHECK(std::isfinite(spin_weight_integrand(d, -3.0, eq)));
  }
}

TEST_CASE("j_parallel and j_perp geometry and helicity invariance") {
  const PartialWaveDipole d = random_dipole(7, 2, 1.0);
  const SphereGrid g = sphere_grid(integrand_band(2));
  const PhotonField plus = PhotonField::circular(1.0, +1);
  const PhotonField minus = PhotonField::circular(1.0, -1);

  // s in the polarization plane: no longitudinal current.
  const CurrentResult par_x = j_parallel(d, plus, Direction::from_unit({1, 0, 0}), g);
  CHECK(norm(par_x.j) == 0.0);

  // s along z: no in-plane current.
  const CurrentResult perp_z = j_perp(d, plus, Direction::from_unit({0, 0, 1}), g);
  CHECK(norm(perp_z.j) == 0.0);

  // s along x: j_perp parallel to x.
  const CurrentResult perp_x = j_perp(d, plus, Direction::from_unit({1, 0, 0}), g);
  CHECK(std::abs(perp_x.j.y) == 0.0);
  CHECK(std::abs(perp_x.j.z) == 0.0);

  // Helicity flip leaves both unchanged.
  const Direction diag = Direction::normalized({1, 0, 1});
  const CurrentResult par_p = j_parallel(d, plus, diag, g);
  const CurrentResult par_m = j_parallel(d, minus, diag, g);
  const CurrentResult perp_p = j_perp(d, plus, diag, g);
  const CurrentResult perp_m = j_perp(d, minus, diag, g);
  CHECK(testutil::vdiff(par_p.j, par_m.j) == 0.0);
  CHECK(testutil::vdiff(perp_p.j, perp_m.j) == 0.0);
}

TEST_CASE("total_yield: zero and constant-term dipoles") {
  const SphereGrid g = sphere_grid(4);
  const PhotonField ph = PhotonField::circular(1.0, +1);
  PartialWaveDipole zero(1.0, 1);
  CHECK(total_yield(zero, ph, g) == 0.0);

  PartialWaveDipole mono(1.0, 1);
  mono.c(Axis::z, dipole::Spin::up, 0, 0) = 1.0;
  CHECK(total_yield(mono, ph, g) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
}

TEST_CASE("currents scale linearly with intensity") {
  const PartialWaveDipole d = random_dipole(23, 2, 1.0);
  const SphereGrid g = sphere_grid(integrand_band(2));
  const Direction s = Direction::normalized({1, 0, 1});
  const CurrentSet base = current_set(d, PhotonField::circular(1.0, +1), s, g);
  const CurrentSet scaled = current_set(d, PhotonField::circular(3.0, +1), s, g);
  const double c2 = 9.0;
  CHECK(rel_dev(scaled.j_pecd, c2 * base.j_pecd) < 1e-14);
  CHECK(rel_dev(scaled.j_cross, c2 * base.j_cross) < 1e-14);
  CHECK(rel_dev(scaled.j_par, c2 * base.j_par) < 1e-14);
  CHECK(rel_dev(scaled.j_perp, c2 * base.j_perp) < 1e-14);
  CHECK(scaled.yield == doctest::Approx(c2 * base.yield).epsilon(1e-14));
  // Molecular factors do not depend on the field at all.
  CHECK(scaled.m_pecd == base.m_pecd);
  CHECK(scaled.m_cross == base.m_cross);
}

TEST_CASE("current_set: axial detection leaves only the longitudinal current") {
  const PartialWaveDipole d = random_dipole(7, 2, 1.0);
  const SphereGrid g = sphere_grid(integrand_band(2));
  const CurrentSet cs =
      current_set(d, PhotonField::circular(1.0, +1), Direction::from_unit({0, 0, 1}), g);
  CHECK(norm(cs.j_cross) == 0.0);
  CHECK(norm(cs.j_perp) == 0.0);
  CHECK(std::abs(cs.j_par.x) == 0.0);
  CHECK(std::abs(cs.j_par.y) == 0.0);
  // Spin-conditioned part reduces to the longitudinal current alone.
  const Vec3 o = oracle::oracle_current(d, PhotonField::circular(1.0, +1), {0, 0, 1}, g,
                                        euler_grid(oracle::euler_band_for_current()), true);
  CHECK(rel_dev(o, cs.j_par) < 1e-11);
}

TEST_CASE("analytic currents match the orientation-averaging oracle") {
  const PartialWaveDipole d = random_dipole(7, 2, 1.0);
  const SphereGrid g = sphere_grid(integrand_band(2));
  const auto eg = euler_grid(oracle::euler_band_for_current());

  for (int xi : {+1, -1}) {
    const PhotonField ph = PhotonField::circular(1.0, xi);
    const Vec3 net = oracle::oracle_current(d, ph, {0, 0, 1}, g, eg, false);
    const CurrentResult pecd = pecd_current(d, ph, g);
    CHECK(rel_dev(net, pecd.j) < 1e-10);

    const Direction s = Direction::normalized({1, 0, 1});
    const Vec3 cond = oracle::oracle_current(d, ph, s.vec(), g, eg, true);
    const CurrentSet cs = current_set(d, ph, s, g);
    CHECK(rel_dev(cond, cs.j_cross + cs.j_par + cs.j_perp) < 1e-10);
  }
}

TEST_CASE("a generic random dipole drives all four currents") {
  const PartialWaveDipole d = random_dipole(7, 2, 1.0);
  const SphereGrid g = sphere_grid(integrand_band(2));
  const CurrentSet cs =
      current_set(d, PhotonField::circular(1.0, +1), Direction::normalized({1, 0, 1}), g);
  CHECK(std::abs(cs.m_pecd) > 1e-6);
  CHECK(std::abs(cs.m_cross) > 1e-6);
  CHECK(std::abs(cs.m_par) > 1e-6);
  CHECK(std::abs(cs.m_perp) > 1e-6);
  CHECK(cs.yield > 1e-6);
}

TEST_CASE("enantiomer flips every molecular factor") {
  const PartialWaveDipole d = random_dipole(7, 2, 1.0);
  const PartialWaveDipole e = dipole::enantiomer(d);
  const SphereGrid g = sphere_grid(integrand_band(2));
  const Direction s = Direction::normalized({1, 0, 1});
  const PhotonField ph = PhotonField::circular(1.0, +1);
  const CurrentSet cd = current_set(d, ph, s, g);
  const CurrentSet ce = current_set(e, ph, s, g);
  CHECK(std::abs(cd.m_pecd + ce.m_pecd) < 1e-12 * std::abs(cd.m_pecd));
  CHECK(std::abs(cd.m_cross + ce.m_cross) < 1e-12);
  CHECK(std::abs(cd.m_par + ce.m_par) < 1e-12);
  CHECK(std::abs(cd.m_perp + ce.m_perp) < 1e-12);
  CHECK(std::abs(cd.yield - ce.yield) < 1e-12 * cd.yield);
}
