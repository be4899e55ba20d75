#include "spincur/oracle.hpp"

#include <cmath>
#include <numbers>

namespace spincur::oracle {

using sphharm::lm_count;
using sphharm::lm_index;
using sphharm::rotation_matrix;

double rate_molecular(const PartialWaveDipole& d, const PhotonField& ph, const Vec3& s,
                      const EulerAngles& rho, const Direction& k_mol) {
  const Mat3 r = rotation_matrix(rho);
  const Vec3 zeta_lab = r * Vec3{0.0, 0.0, 1.0};
  double w = 0.0;
  for (Spin mu : dipole::kSpins) {
    const CVec3 d_lab = r * d.evaluate(mu, k_mol);
    const double amp = std::norm(cdot(d_lab, ph.E));
    w += 0.5 * amp * (1.0 + dipole::spin_sign(mu) * dot(s, zeta_lab));
  }
  return w;
}

Vec3 oracle_current(const PartialWaveDipole& d, const PhotonField& ph, const Vec3& s,
                    const SphereGrid& k_grid, const EulerGrid& e_grid, bool spin_conditioned) {
  // Evaluate the molecular-frame dipole once per node; everything inside the
  // orientation loop is plain 3-vector arithmetic.
  const std::vector<CVec3> d_up = d.evaluate_nodes(Spin::up, k_grid);
  const std::vector<CVec3> d_down = d.evaluate_nodes(Spin::down, k_grid);
  const double k = d.k();

  Vec3 j{};
  for (std::size_t ie = 0; ie < e_grid.nodes.size(); ++ie) {
    const Mat3 r = rotation_matrix(e_grid.nodes[ie]);
    const Vec3 zeta_lab = r * Vec3{0.0, 0.0, 1.0};
    const double spin_proj = dot(s, zeta_lab);
    const double we = e_grid.weights[ie];
    Vec3 partial{};
    for (std::size_t ik = 0; ik < k_grid.nodes.size(); ++ik) {
      const double amp_up = std::norm(cdot(r * d_up[ik], ph.E));
      const double amp_down = std::norm(cdot(r * d_down[ik], ph.E));
      const double w_part = spin_conditioned
                                ? 0.5 * (amp_up - amp_down) * spin_proj
                                : 0.5 * (amp_up + amp_down);
      partial += (k_grid.weights[ik] * w_part) * (r * k_grid.nodes[ik].vec());
    }
    j += (we * k) * partial;
  }
  return j;
}

ATable a_coefficients(const PartialWaveDipole& d, const PhotonField& ph,
                      const SphereGrid& k_grid, const SphereGrid& s_grid,
                      const EulerGrid& e_grid, int l_k, int l_s) {
  const std::size_t nk = k_grid.nodes.size();
  const std::size_t ns = s_grid.nodes.size();

  // W(k_lab, s) tabulated on the product grid by orientation quadrature.
  // For a fixed lab direction the molecular emission direction is R^T k_lab.
  std::vector<double> iso(nk, 0.0);         // s-independent part
  std::vector<Vec3> spin_vec(nk, Vec3{});   // coefficient of s
  for (std::size_t ie = 0; ie < e_grid.nodes.size(); ++ie) {
    const Mat3 r = rotation_matrix(e_grid.nodes[ie]);
    const Mat3 rt = r.transposed();
    const Vec3 zeta_lab = r * Vec3{0.0, 0.0, 1.0};
    const double we = e_grid.weights[ie];
    for (std::size_t ik = 0; ik < nk; ++ik) {
      const Direction k_mol = Direction::normalized(rt * k_grid.nodes[ik].vec());
      const double amp_up = std::norm(cdot(r * d.evaluate(Spin::up, k_mol), ph.E));
      const double amp_down = std::norm(cdot(r * d.evaluate(Spin::down, k_mol), ph.E));
      iso[ik] += we * 0.5 * (amp_up + amp_down);
      spin_vec[ik] += (we * 0.5 * (amp_up - amp_down)) * zeta_lab;
    }
  }

  ATable out;
  out.l_k = l_k;
  out.l_s = l_s;
  out.a.assign(std::size_t(lm_count(l_k)) * lm_count(l_s), cplx{});

  std::vector<std::vector<cplx>> yk(nk), ys(ns);
  for (std::size_t ik = 0; ik < nk; ++ik) yk[ik] = sphharm::ylm_table(l_k, k_grid.nodes[ik]);
  for (std::size_t is = 0; is < ns; ++is) ys[is] = sphharm::ylm_table(l_s, s_grid.nodes[is]);

  for (std::size_t ik = 0; ik < nk; ++ik) {
    const double wk = k_grid.weights[ik];
    for (std::size_t is = 0; is < ns; ++is) {
      const double w = wk * s_grid.weights[is];
      const double rate = iso[ik] + dot(spin_vec[ik], s_grid.nodes[is].vec());
      for (int lm = 0; lm < lm_count(l_k); ++lm)
        for (int lsms = 0; lsms < lm_count(l_s); ++lsms)
          out.a[std::size_t(lm) * lm_count(l_s) + lsms] +=
              w * rate * std::conj(yk[ik][lm]) * std::conj(ys[is][lsms]);
    }
  }
  return out;
}

double oracle_total_yield(const PartialWaveDipole& d, const PhotonField& ph,
                          const SphereGrid& k_grid, const SphereGrid& s_grid,
                          const EulerGrid& e_grid) {
  const std::vector<CVec3> d_up = d.evaluate_nodes(Spin::up, k_grid);
  const std::vector<CVec3> d_down = d.evaluate_nodes(Spin::down, k_grid);

  double acc = 0.0;
  for (std::size_t ie = 0; ie < e_grid.nodes.size(); ++ie) {
    const Mat3 r = rotation_matrix(e_grid.nodes[ie]);
    const Vec3 zeta_lab = r * Vec3{0.0, 0.0, 1.0};
    const double we = e_grid.weights[ie];
    for (std::size_t ik = 0; ik < k_grid.nodes.size(); ++ik) {
      const double amp_up = std::norm(cdot(r * d_up[ik], ph.E));
      const double amp_down = std::norm(cdot(r * d_down[ik], ph.E));
      const double wk = k_grid.weights[ik];
      for (std::size_t is = 0; is < s_grid.nodes.size(); ++is) {
        const double proj = dot(s_grid.nodes[is].vec(), zeta_lab);
        const double w_rate = 0.5 * (amp_up * (1.0 + proj) + amp_down * (1.0 - proj));
        acc += we * wk * s_grid.weights[is] * w_rate;
      }
    }
  }
  return acc / (4.0 * std::numbers::pi);
}

}  // namespace spincur::oracle
