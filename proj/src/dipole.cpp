#include "spincur/dipole.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

namespace spincur::dipole {

using sphharm::lm_count;
using sphharm::lm_index;

PartialWaveDipole::PartialWaveDipole(double k, int l_max, std::string label)
    : k_(k), l_max_(l_max), label_(std::move(label)) {
  if (k <= 0.0) throw std::invalid_argument("PartialWaveDipole: k must be > 0");
  if (l_max < 0) throw std::invalid_argument("PartialWaveDipole: l_max must be >= 0");
  coef_.assign(std::size_t(6) * lm_count(l_max), cplx{});
}

std::size_t PartialWaveDipole::index(Axis q, Spin mu, int l, int m) const {
  if (l < 0 || l > l_max_ || std::abs(m) > l)
    throw std::invalid_argument("PartialWaveDipole: (l,m) out of range");
  const std::size_t channel = std::size_t(int(q)) * 2 + std::size_t(int(mu));
  return channel * lm_count(l_max_) + lm_index(l, m);
}

cplx& PartialWaveDipole::c(Axis q, Spin mu, int l, int m) { return coef_[index(q, mu, l, m)]; }

const cplx& PartialWaveDipole::c(Axis q, Spin mu, int l, int m) const {
  return coef_[index(q, mu, l, m)];
}

CVec3 PartialWaveDipole::evaluate(Spin mu, const Direction& dir) const {
  const auto y = sphharm::ylm_table(l_max_, dir);
  CVec3 out{};
  for (int l = 0; l <= l_max_; ++l)
    for (int m = -l; m <= l; ++m) {
      const cplx& basis = y[lm_index(l, m)];
      out.x += c(Axis::x, mu, l, m) * basis;
      out.y += c(Axis::y, mu, l, m) * basis;
      out.z += c(Axis::z, mu, l, m) * basis;
    }
  return out;
}

std::vector<CVec3> PartialWaveDipole::evaluate_nodes(Spin mu, const SphereGrid& grid) const {
  std::vector<CVec3> out;
  out.reserve(grid.nodes.size());
  for (const Direction& d : grid.nodes) out.push_back(evaluate(mu, d));
  return out;
}

PartialWaveDipole enantiomer(const PartialWaveDipole& d) {
  PartialWaveDipole out(d.k(), d.l_max(), d.label().empty() ? "" : d.label() + " (mirror)");
  for (Axis q : kAxes)
    for (Spin mu : kSpins)
      for (int l = 0; l <= d.l_max(); ++l) {
        const double factor = (l % 2 == 0) ? -1.0 : 1.0;  // -(-1)^l
        for (int m = -l; m <= l; ++m) out.c(q, mu, l, m) = factor * d.c(q, mu, l, m);
      }
  return out;
}

PartialWaveDipole random_dipole(std::uint64_t seed, int l_max, double k) {
  if (l_max < 1) throw std::invalid_argument("random_dipole: l_max must be >= 1");
  std::mt19937_64 eng(seed);
  auto draw = [&eng]() { return double(eng() >> 11) * 0x1.0p-53 * 2.0 - 1.0; };
  PartialWaveDipole d(k, l_max, "random seed " + std::to_string(seed));
  for (Axis q : kAxes)
    for (Spin mu : kSpins)
      for (int l = 0; l <= l_max; ++l)
        for (int m = -l; m <= l; ++m) {
          const double re = draw();
          const double im = draw();
          d.c(q, mu, l, m) = cplx(re, im);
        }
  return d;
}

PartialWaveDipole channel_dipole(const ChannelSpec& spec, double k) {
  if (spec.components.empty())
    throw std::invalid_argument("channel_dipole: at least one bound component required");
  int l_max = 0;
  for (const BoundComponent& b : spec.components) {
    if (b.l < 0 || std::abs(b.m) > b.l)
      throw std::invalid_argument("channel_dipole: invalid bound (l,m)");
    for (const auto& [lp, tau] : b.channels) {
      (void)tau;
      if (std::abs(lp - b.l) != 1)
        throw std::invalid_argument(
            "channel_dipole: dipole selection rule |l' - l_b| = 1 violated");
      l_max = std::max(l_max, lp);
    }
  }

  PartialWaveDipole out(k, l_max, "channel model");
  const double cosw = std::cos(spec.phi_mix);
  const cplx sinw = (spec.mixing == ChannelSpec::Mixing::imag_sum)
                        ? cplx(0.0, std::sin(spec.phi_mix))
                        : cplx(std::sin(spec.phi_mix), 0.0);

  // Spherical components of the dipole operator: r_{+1} = -(x+iy)/sqrt(2),
  // r_0 = z, r_{-1} = (x-iy)/sqrt(2); each equals r * sqrt(4pi/3) Y_{1,nu}.
  const double op_norm = std::sqrt(4.0 * std::numbers::pi / 3.0);
  std::vector<cplx> sph[3];  // nu = +1, 0, -1 -> index 0, 1, 2; per (mu, lm)
  for (auto& s : sph) s.assign(std::size_t(2) * lm_count(l_max), cplx{});

  for (std::size_t ib = 0; ib < spec.components.size(); ++ib) {
    const BoundComponent& b = spec.components[ib];
    cplx weight{1.0, 0.0};
    if (ib == 0)
      weight = cosw;
    else if (ib == 1)
      weight = double(spec.sign) * sinw;
    const cplx scale = weight * b.amplitude;
    for (const auto& [lp, tau] : b.channels) {
      for (int inu = 0; inu < 3; ++inu) {
        const int nu = 1 - inu;
        const int mp = b.m + nu;
        if (std::abs(mp) > lp) continue;
        const double g = sphharm::gaunt(lp, mp, 1, nu, b.l, b.m);
        if (g == 0.0) continue;
        sph[inu][std::size_t(int(b.mu)) * lm_count(l_max) + lm_index(lp, mp)] +=
            scale * tau * op_norm * g;
      }
    }
  }

  // Cartesian assembly: x = (r_{-1} - r_{+1})/sqrt(2), y = i(r_{-1} + r_{+1})/sqrt(2).
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (Spin mu : kSpins)
    for (int l = 0; l <= l_max; ++l)
      for (int m = -l; m <= l; ++m) {
        const std::size_t at = std::size_t(int(mu)) * lm_count(l_max) + lm_index(l, m);
        const cplx plus = sph[0][at], zero = sph[1][at], minus = sph[2][at];
        out.c(Axis::x, mu, l, m) = (minus - plus) * inv_sqrt2;
        out.c(Axis::y, mu, l, m) = cplx(0.0, 1.0) * (minus + plus) * inv_sqrt2;
        out.c(Axis::z, mu, l, m) = zero;
      }
  return out;
}

namespace {

struct Row {
  double k;
  Axis q;
  Spin mu;
  int l, m;
  cplx value;
};

[[noreturn]] void parse_fail(const std::string& path, std::size_t line, const std::string& what) {
  throw std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) {
    const auto b = field.find_first_not_of(" \t\r");
    const auto e = field.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
  }
  return out;
}

double parse_double(const std::string& s, const std::string& path, std::size_t line) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) parse_fail(path, line, "bad number '" + s + "'");
  return v;
}

int parse_int(const std::string& s, const std::string& path, std::size_t line) {
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size()) parse_fail(path, line, "bad integer '" + s + "'");
  return int(v);
}

std::vector<Row> read_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open for reading");
  std::vector<Row> rows;
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto f = split_csv(line);
    if (!header_seen) {
      if (f.size() != 7 || f[0] != "k")
        parse_fail(path, lineno, "expected header 'k,q,mu,l,m,re,im'");
      header_seen = true;
      continue;
    }
    if (f.size() != 7)
      parse_fail(path, lineno, "expected 7 fields, got " + std::to_string(f.size()));
    Row r;
    r.k = parse_double(f[0], path, lineno);
    if (r.k <= 0.0) parse_fail(path, lineno, "k must be > 0");
    if (f[1] == "x")
      r.q = Axis::x;
    else if (f[1] == "y")
      r.q = Axis::y;
    else if (f[1] == "z")
      r.q = Axis::z;
    else
      parse_fail(path, lineno, "q must be one of x,y,z");
    if (f[2] == "+0.5" || f[2] == "0.5")
      r.mu = Spin::up;
    else if (f[2] == "-0.5")
      r.mu = Spin::down;
    else
      parse_fail(path, lineno, "mu must be +0.5 or -0.5");
    r.l = parse_int(f[3], path, lineno);
    r.m = parse_int(f[4], path, lineno);
    if (r.l < 0) parse_fail(path, lineno, "l must be >= 0");
    if (std::abs(r.m) > r.l) parse_fail(path, lineno, "|m| > l");
    r.value = cplx(parse_double(f[5], path, lineno), parse_double(f[6], path, lineno));
    if (!std::isfinite(r.value.real()) || !std::isfinite(r.value.imag()))
      parse_fail(path, lineno, "coefficient must be finite");

    // Duplicate (k,q,mu,l,m) check against earlier rows of the same block.
    for (const Row& o : rows)
      if (o.k == r.k && o.q == r.q && o.mu == r.mu && o.l == r.l && o.m == r.m)
        parse_fail(path, lineno, "duplicate coefficient key (q,mu,l,m) within k block");
    rows.push_back(r);
  }
  if (!header_seen) throw std::runtime_error(path + ": missing header row");
  if (rows.empty()) throw std::runtime_error(path + ": no coefficient rows");
  return rows;
}

}  // namespace

std::vector<PartialWaveDipole> load_dipole_scan(const std::string& path) {
  const std::vector<Row> rows = read_rows(path);

  // k blocks in order of first appearance.
  std::vector<double> ks;
  for (const Row& r : rows) {
    bool seen = false;
    for (double k : ks) seen = seen || (k == r.k);
    if (!seen) ks.push_back(r.k);
  }

  std::vector<PartialWaveDipole> out;
  for (double k : ks) {
    int l_max = 0;
    for (const Row& r : rows)
      if (r.k == k) l_max = std::max(l_max, r.l);
    PartialWaveDipole d(k, l_max, path);
    for (const Row& r : rows)
      if (r.k == k) d.c(r.q, r.mu, r.l, r.m) = r.value;
    out.push_back(std::move(d));
  }
  return out;
}

PartialWaveDipole load_dipole(const std::string& path) {
  auto scan = load_dipole_scan(path);
  if (scan.size() != 1)
    throw std::runtime_error(path + ": file defines " + std::to_string(scan.size()) +
                             " k blocks; expected exactly one");
  return std::move(scan.front());
}

void save_dipole_scan(const std::vector<PartialWaveDipole>& scan, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << "k,q,mu,l,m,re,im\n";
  char buf[256];
  for (const PartialWaveDipole& d : scan) {
    for (Axis q : kAxes)
      for (Spin mu : kSpins)
        for (int l = 0; l <= d.l_max(); ++l)
          for (int m = -l; m <= l; ++m) {
            const cplx v = d.c(q, mu, l, m);
            std::snprintf(buf, sizeof(buf), "%.17g,%c,%s,%d,%d,%.17g,%.17g\n", d.k(),
                          "xyz"[int(q)], mu == Spin::up ? "+0.5" : "-0.5", l, m, v.real(),
                          v.imag());
            out << buf;
          }
  }
  if (!out) throw std::runtime_error(path + ": write failed");
}

void save_dipole(const PartialWaveDipole& d, const std::string& path) {
  save_dipole_scan({d}, path);
}

}  // namespace spincur::dipole
