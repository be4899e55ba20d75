#include "spincur/currents.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace spincur::currents {

namespace {

void check_band(const PartialWaveDipole& d, const SphereGrid& grid, const char* who) {
  if (grid.band < 2 * d.l_max() + 1)
    throw std::invalid_argument(std::string(who) + ": grid band insufficient for dipole l_max");
}

void check_unit(const Direction& s) { (void)s; }  // Direction is unit by construction

}  // namespace

PhotonField PhotonField::circular(double amplitude, int xi, std::string omega_label) {
  if (xi != 1 && xi != -1) throw std::invalid_argument("PhotonField: xi must be +1 or -1");
  const double a = amplitude / std::sqrt(2.0);
  return {{cplx(a, 0.0), cplx(0.0, xi * a), cplx(0.0, 0.0)}, xi, std::move(omega_label)};
}

Vec3 PhotonField::photon_spin() const {
  const CVec3 x = cplx(0.0, -1.0) * cross(conj(E), E);
  return real(x);
}

CurrentResult pecd_current(const PartialWaveDipole& d, const PhotonField& ph,
                           const SphereGrid& grid) {
  check_band(d, grid, "pecd_current");
  double acc = 0.0;
  for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
    const Vec3 b_sym = 0.5 * (fields::propensity(d.evaluate(Spin::up, grid.nodes[i])) +
                              fields::propensity(d.evaluate(Spin::down, grid.nodes[i])));
    acc += grid.weights[i] * dot(grid.nodes[i].vec(), b_sym);
  }
  const double factor = d.k() * acc / 6.0;
  return {factor * ph.photon_spin(), factor};
}

CurrentResult j_cross(const PartialWaveDipole& d, const PhotonField& ph, const Direction& s,
                      const SphereGrid& grid) {
  check_band(d, grid, "j_cross");
  check_unit(s);
  const Vec3 sigma = spin_quantization_axis(Spin::up);
  double acc = 0.0;
  for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
    const Vec3 b_anti = 0.5 * (fields::propensity(d.evaluate(Spin::up, grid.nodes[i])) -
                               fields::propensity(d.evaluate(Spin::down, grid.nodes[i])));
    acc += grid.weights[i] * dot(sigma, cross(b_anti, grid.nodes[i].vec()));
  }
  const double factor = d.k() * acc / 12.0;
  return {factor * cross(s.vec(), ph.photon_spin()), factor};
}

double spin_weight_integrand(const PartialWaveDipole& d, double lambda, const Direction& k_hat) {
  if (lambda == 0.0) throw std::invalid_argument("spin_weight_integrand: lambda must be nonzero");
  const Vec3 sigma = spin_quantization_axis(Spin::up);
  const double k = d.k();
  double acc = 0.0;
  for (Spin mu : dipole::kSpins) {
    const CVec3 dm = d.evaluate(mu, k_hat);
    const double helicity = k * dot(k_hat.vec(), sigma);
    const double geom =
        (k / lambda) * (cdot(dm, k_hat.vec()) * cdot(conj(dm), sigma)).real();
    acc += dipole::spin_sign(mu) * (norm2(dm) * helicity - geom);
  }
  return acc;
}

double spin_weight_raw(const PartialWaveDipole& d, double lambda, Spin mu,
                       const Direction& k_hat) {
  if (lambda == 0.0) throw std::invalid_argument("spin_weight_raw: lambda must be nonzero");
  const Vec3 sigma = spin_quantization_axis(Spin::up);
  const double proj = dot(k_hat.vec(), sigma);
  if (std::abs(proj) < 1e-10)
    throw std::invalid_argument("spin_weight_raw: k_hat . sigma too close to zero");
  const CVec3 dm = d.evaluate(mu, k_hat);
  const double d2 = norm2(dm);
  if (d2 == 0.0) throw std::invalid_argument("spin_weight_raw: |D| vanishes at this direction");
  const double k = d.k();
  const double num = (cdot(dm, k_hat.vec()) * k * cdot(conj(dm), sigma)).real();
  return 1.0 - num / (lambda * d2 * k * proj);
}

namespace {

double spin_weight_factor(const PartialWaveDipole& d, double lambda, const SphereGrid& grid,
                          double prefactor) {
  double acc = 0.0;
  for (std::size_t i = 0; i < grid.nodes.size(); ++i)
    acc += grid.weights[i] * spin_weight_integrand(d, lambda, grid.nodes[i]);
  return prefactor * acc;
}

}  // namespace

CurrentResult j_parallel(const PartialWaveDipole& d, const PhotonField& ph, const Direction& s,
                         const SphereGrid& grid) {
  check_band(d, grid, "j_parallel");
  check_unit(s);
  const double factor = spin_weight_factor(d, 2.0, grid, 1.0 / 15.0);
  const Vec3 j = factor * ph.intensity() * s.z() * Vec3{0.0, 0.0, 1.0};
  return {j, factor};
}

CurrentResult j_perp(const PartialWaveDipole& d, const PhotonField& ph, const Direction& s,
                     const SphereGrid& grid) {
  check_band(d, grid, "j_perp");
  check_unit(s);
  const double factor = spin_weight_factor(d, -3.0, grid, 1.0 / 20.0);
  const Vec3 in_plane = s.vec() - s.z() * Vec3{0.0, 0.0, 1.0};
  return {factor * ph.intensity() * in_plane, factor};
}

double total_yield(const PartialWaveDipole& d, const PhotonField& ph, const SphereGrid& grid) {
  check_band(d, grid, "total_yield");
  double acc = 0.0;
  for (std::size_t i = 0; i < grid.nodes.size(); ++i)
    for (Spin mu : dipole::kSpins)
      acc += grid.weights[i] * norm2(d.evaluate(mu, grid.nodes[i]));
  return acc * ph.intensity() / 6.0;
}

CurrentSet current_set(const PartialWaveDipole& d, const PhotonField& ph, const Direction& s,
                       const SphereGrid& grid) {
  CurrentSet out;
  const CurrentResult pecd = pecd_current(d, ph, grid);
  const CurrentResult cr = j_cross(d, ph, s, grid);
  const CurrentResult par = j_parallel(d, ph, s, grid);
  const CurrentResult perp = j_perp(d, ph, s, grid);
  out.j_pecd = pecd.j;
  out.j_cross = cr.j;
  out.j_par = par.j;
  out.j_perp = perp.j;
  out.m_pecd = pecd.factor;
  out.m_cross = cr.factor;
  out.m_par = par.factor;
  out.m_perp = perp.factor;
  out.yield = total_yield(d, ph, grid);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  out.jn_pecd = out.yield > 0.0 ? norm(out.j_pecd) / out.yield : nan;
  out.jn_cross = out.yield > 0.0 ? norm(out.j_cross) / out.yield : nan;
  out.jn_par = out.yield > 0.0 ? norm(out.j_par) / out.yield : nan;
  out.jn_perp = out.yield > 0.0 ? norm(out.j_perp) / out.yield : nan;
  out.s_axis = s.vec();
  out.xi = ph.xi;
  out.k = d.k();
  return out;
}

}  // namespace spincur::currents
