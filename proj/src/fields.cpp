#include "spincur/fields.hpp"

#include <cmath>
#include <stdexcept>

namespace spincur::fields {

Vec3 propensity(const CVec3& d) {
  const CVec3 b = cplx(0.0, 1.0) * cross(conj(d), d);
  const double scale = norm2(d);
  const Vec3 residue = imag(b);
  if (norm(residue) > 1e-12 * scale)
    throw std::runtime_error("propensity: imaginary residue above tolerance");
  return real(b);
}

PropensityFieldSamples field_samples(const PartialWaveDipole& d, const SphereGrid& grid) {
  if (grid.band < 2 * d.l_max())
    throw std::invalid_argument("field_samples: grid band must be >= 2 * l_max");
  PropensityFieldSamples out;
  out.grid = grid;
  out.k = d.k();
  const std::size_t n = grid.nodes.size();
  out.b_up.resize(n);
  out.b_down.resize(n);
  out.b_sym.resize(n);
  out.b_anti.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.b_up[i] = propensity(d.evaluate(Spin::up, grid.nodes[i]));
    out.b_down[i] = propensity(d.evaluate(Spin::down, grid.nodes[i]));
    out.b_sym[i] = 0.5 * (out.b_up[i] + out.b_down[i]);
    out.b_anti[i] = 0.5 * (out.b_up[i] - out.b_down[i]);
  }
  return out;
}

const std::vector<Vec3>& select(const PropensityFieldSamples& f, FieldSelect which) {
  switch (which) {
    case FieldSelect::sym:
      return f.b_sym;
    case FieldSelect::anti:
      return f.b_anti;
    case FieldSelect::up:
      return f.b_up;
    case FieldSelect::down:
      return f.b_down;
  }
  throw std::invalid_argument("select: bad field selector");
}

MultipoleSet moments(const PropensityFieldSamples& f, FieldSelect which, int l_report) {
  if (l_report < 0) throw std::invalid_argument("moments: l_report must be >= 0");
  const std::vector<Vec3>& b = select(f, which);
  const SphereGrid& g = f.grid;

  MultipoleSet out;
  out.l_report = l_report;
  out.b_par_lm.assign(sphharm::lm_count(l_report), cplx{});
  out.b_perp1_lm.assign(sphharm::lm_count(l_report), cplx{});
  out.b_perp2_lm.assign(sphharm::lm_count(l_report), cplx{});

  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const double w = g.weights[i];
    out.omega += w * b[i];
    out.b_par += w * dot(g.nodes[i].vec(), b[i]);
  }

  for (int l = 0; l <= l_report; ++l)
    for (int m = -l; m <= l; ++m) {
      cplx par{}, perp1{}, perp2{};
      for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        const double w = g.weights[i];
        const Direction& n = g.nodes[i];
        const cplx y = sphharm::ylm(l, m, n);
        const CVec3 grad = sphharm::grad_ylm(l, m, n);
        par += w * dot(n.vec(), b[i]) * y;
        perp1 += w * cdot(b[i], grad);
        perp2 += w * cdot(b[i], cross(n.vec(), grad));
      }
      out.b_par_lm[sphharm::lm_index(l, m)] = par;
      out.b_perp1_lm[sphharm::lm_index(l, m)] = perp1;
      out.b_perp2_lm[sphharm::lm_index(l, m)] = perp2;
    }
  return out;
}

}  // namespace spincur::fields
