#include "spincur/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "spincur/currents.hpp"
#include "spincur/fields.hpp"
#include "spincur/oracle.hpp"

namespace spincur::cli {

using json = nlohmann::ordered_json;
using currents::CurrentSet;
using currents::PhotonField;
using dipole::PartialWaveDipole;

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

cplx parse_complex(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ScenarioParseError(where + ": expected [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

dipole::ChannelSpec parse_channel(const json& j) {
  dipole::ChannelSpec spec;
  if (j.contains("phi_mix")) spec.phi_mix = j.at("phi_mix").get<double>();
  if (j.contains("type")) {
    const std::string t = j.at("type").get<std::string>();
    if (t == "p")
      spec.mixing = dipole::ChannelSpec::Mixing::real_sum;
    else if (t == "c")
      spec.mixing = dipole::ChannelSpec::Mixing::imag_sum;
    else
      throw ScenarioParseError("dipole.channel.type: expected \"p\" or \"c\"");
  }
  if (j.contains("sign")) {
    const std::string sgn = j.at("sign").get<std::string>();
    if (sgn == "+")
      spec.sign = +1;
    else if (sgn == "-")
      spec.sign = -1;
    else
      throw ScenarioParseError("dipole.channel.sign: expected \"+\" or \"-\"");
  }
  if (!j.contains("components") || !j.at("components").is_array())
    throw ScenarioParseError("dipole.channel.components: expected array");
  for (const json& jc : j.at("components")) {
    dipole::BoundComponent b;
    b.l = jc.at("l").get<int>();
    b.m = jc.at("m").get<int>();
    if (jc.contains("mu")) {
      const double mu = jc.at("mu").get<double>();
      if (mu != 0.5 && mu != -0.5)
        throw ScenarioParseError("dipole.channel.components.mu: expected 0.5 or -0.5");
      b.mu = (mu > 0) ? dipole::Spin::up : dipole::Spin::down;
    }
    if (jc.contains("amplitude")) b.amplitude = parse_complex(jc.at("amplitude"), "amplitude");
    if (!jc.contains("channels") || !jc.at("channels").is_array())
      throw ScenarioParseError("dipole.channel.components.channels: expected array");
    for (const json& jch : jc.at("channels"))
      b.channels.emplace_back(jch.at("l").get<int>(), parse_complex(jch.at("tau"), "tau"));
    spec.components.push_back(std::move(b));
  }
  return spec;
}

std::vector<double> parse_scan_list(const json& j, const std::string& where) {
  std::vector<double> out;
  if (j.is_array()) {
    for (const json& v : j) out.push_back(v.get<double>());
  } else if (j.is_object()) {
    const double start = j.at("start").get<double>();
    const double stop = j.at("stop").get<double>();
    const int count = j.at("count").get<int>();
    if (count < 1) throw ScenarioParseError(where + ".count: must be >= 1");
    for (int i = 0; i < count; ++i)
      out.push_back(count == 1 ? start : start + (stop - start) * i / double(count - 1));
  } else {
    throw ScenarioParseError(where + ": expected array or {start, stop, count}");
  }
  return out;
}

}  // namespace

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path + ": cannot open scenario file");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ScenarioParseError(path + ": " + e.what());
  }

  Scenario s;
  try {
    const json& jd = j.at("dipole");
    const std::string source = jd.at("source").get<std::string>();
    if (source == "file") {
      s.dipole.kind = DipoleSource::Kind::file;
      s.dipole.path = jd.at("path").get<std::string>();
    } else if (source == "random") {
      s.dipole.kind = DipoleSource::Kind::random;
      s.dipole.seed = jd.at("seed").get<std::uint64_t>();
      s.dipole.l_max = jd.at("l_max").get<int>();
      if (jd.contains("k")) s.dipole.k = jd.at("k").get<double>();
    } else if (source == "channel") {
      s.dipole.kind = DipoleSource::Kind::channel;
      if (jd.contains("k")) s.dipole.k = jd.at("k").get<double>();
      s.dipole.channel = parse_channel(jd.at("channel"));
    } else {
      throw ScenarioParseError("dipole.source: expected file, channel or random");
    }

    if (j.contains("photon")) {
      const json& jp = j.at("photon");
      if (jp.contains("xi")) s.photon.xi = jp.at("xi").get<int>();
      if (jp.contains("intensity")) s.photon.intensity = jp.at("intensity").get<double>();
      if (jp.contains("omega_label")) s.photon.omega_label = jp.at("omega_label").get<std::string>();
    }

    if (!j.contains("spin_axes") || !j.at("spin_axes").is_array())
      throw ScenarioParseError("spin_axes: expected array of [x,y,z]");
    for (const json& ja : j.at("spin_axes")) {
      if (!ja.is_array() || ja.size() != 3)
        throw ScenarioParseError("spin_axes: each entry must be [x,y,z]");
      s.spin_axes.push_back(
          {ja[0].get<double>(), ja[1].get<double>(), ja[2].get<double>()});
    }

    if (j.contains("scan")) {
      const json& js = j.at("scan");
      if (js.contains("phi_mix")) s.scan.phi_mix = parse_scan_list(js.at("phi_mix"), "scan.phi_mix");
      if (js.contains("k")) s.scan.k = parse_scan_list(js.at("k"), "scan.k");
    }

    if (j.contains("output")) {
      const json& jo = j.at("output");
      if (jo.contains("format")) {
        const std::string f = jo.at("format").get<std::string>();
        if (f == "csv")
          s.output.format = OutputSpec::Format::csv;
        else if (f == "json")
          s.output.format = OutputSpec::Format::json;
        else
          throw ScenarioParseError("output.format: expected csv or json");
      }
      if (jo.contains("path")) s.output.path = jo.at("path").get<std::string>();
      if (jo.contains("per_n")) s.output.per_n = jo.at("per_n").get<bool>();
      if (jo.contains("lmax_report")) s.output.lmax_report = jo.at("lmax_report").get<int>();
      if (jo.contains("multipoles")) s.output.multipoles = jo.at("multipoles").get<bool>();
      if (jo.contains("a_table")) s.output.a_table = jo.at("a_table").get<bool>();
    }
  } catch (const json::exception& e) {
    throw ScenarioParseError(path + ": " + e.what());
  }
  return s;
}

std::vector<std::string> validate(const Scenario& s) {
  std::vector<std::string> errors;
  auto fail = [&errors](const std::string& msg) { errors.push_back(msg); };

  if (s.photon.xi != 1 && s.photon.xi != -1) fail("photon.xi: must be +1 or -1");
  if (!(s.photon.intensity > 0.0)) fail("photon.intensity: must be > 0");

  if (s.spin_axes.empty()) fail("spin_axes: at least one spin axis required");
  for (std::size_t i = 0; i < s.spin_axes.size(); ++i)
    if (std::abs(norm(s.spin_axes[i]) - 1.0) > 1e-12)
      fail("spin_axes[" + std::to_string(i) + "]: spin axis not unit");

  switch (s.dipole.kind) {
    case DipoleSource::Kind::file:
      if (s.dipole.path.empty())
        fail("dipole.path: required for file source");
      else if (!std::filesystem::exists(s.dipole.path))
        fail("dipole.path: file does not exist: " + s.dipole.path);
      break;
    case DipoleSource::Kind::random:
      if (s.dipole.l_max < 1) fail("dipole.l_max: must be >= 1");
      if (!(s.dipole.k > 0.0)) fail("dipole.k: must be > 0");
      break;
    case DipoleSource::Kind::channel: {
      if (!(s.dipole.k > 0.0)) fail("dipole.k: must be > 0");
      const auto& spec = s.dipole.channel;
      if (spec.components.empty()) fail("dipole.channel: at least one bound component required");
      for (std::size_t i = 0; i < spec.components.size(); ++i) {
        const auto& b = spec.components[i];
        const std::string at = "dipole.channel.components[" + std::to_string(i) + "]";
        if (b.l < 0 || std::abs(b.m) > b.l) fail(at + ": invalid bound (l,m)");
        if (b.channels.empty()) fail(at + ": at least one continuum channel required");
        for (const auto& [lp, tau] : b.channels) {
          (void)tau;
          if (std::abs(lp - b.l) != 1)
            fail(at + ": dipole selection rule |l' - l_b| = 1 violated (l'=" +
                 std::to_string(lp) + ", l_b=" + std::to_string(b.l) + ")");
        }
      }
      break;
    }
  }

  for (double phi : s.scan.phi_mix)
    if (!std::isfinite(phi)) fail("scan.phi_mix: entries must be finite");
  for (double k : s.scan.k)
    if (!(k > 0.0)) fail("scan.k: entries must be > 0");
  if (!s.scan.k.empty() && s.dipole.kind == DipoleSource::Kind::file)
    fail("scan.k: not allowed with a file source (k blocks come from the file)");
  if (!s.scan.phi_mix.empty() && s.dipole.kind != DipoleSource::Kind::channel)
    fail("scan.phi_mix: only allowed with a channel source");

  if (s.output.lmax_report < -1) fail("output.lmax_report: must be >= 0");
  return errors;
}

namespace {

// One dipole variant of the scan with its identifying tags.
struct ScanPoint {
  PartialWaveDipole d;
  double phi_mix = std::numeric_limits<double>::quiet_NaN();
  std::string mix_type;  // "p"/"c" or empty
  std::string mix_sign;  // "+"/"-" or empty
};

std::vector<ScanPoint> scan_points(const Scenario& s) {
  std::vector<ScanPoint> points;
  switch (s.dipole.kind) {
    case DipoleSource::Kind::file: {
      for (PartialWaveDipole& d : dipole::load_dipole_scan(s.dipole.path))
        points.push_back({std::move(d), std::numeric_limits<double>::quiet_NaN(), "", ""});
      break;
    }
    case DipoleSource::Kind::random: {
      std::vector<double> ks = s.scan.k.empty() ? std::vector<double>{s.dipole.k} : s.scan.k;
      for (double k : ks)
        points.push_back({dipole::random_dipole(s.dipole.seed, s.dipole.l_max, k),
                          std::numeric_limits<double>::quiet_NaN(), "", ""});
      break;
    }
    case DipoleSource::Kind::channel: {
      const std::vector<double> ks =
          s.scan.k.empty() ? std::vector<double>{s.dipole.k} : s.scan.k;
      if (s.scan.phi_mix.empty()) {
        dipole::ChannelSpec spec = s.dipole.channel;
        for (double k : ks)
          points.push_back({dipole::channel_dipole(spec, k), spec.phi_mix,
                            spec.mixing == dipole::ChannelSpec::Mixing::real_sum ? "p" : "c",
                            spec.sign > 0 ? "+" : "-"});
      } else {
        // Mixing-angle sweep: emit every sign and both mixing families.
        for (double k : ks)
          for (double phi : s.scan.phi_mix)
            for (int sign : {+1, -1})
              for (auto mixing : {dipole::ChannelSpec::Mixing::real_sum,
                                  dipole::ChannelSpec::Mixing::imag_sum}) {
                dipole::ChannelSpec spec = s.dipole.channel;
                spec.phi_mix = phi;
                spec.sign = sign;
                spec.mixing = mixing;
                points.push_back(
                    {dipole::channel_dipole(spec, k), phi,
                     mixing == dipole::ChannelSpec::Mixing::real_sum ? "p" : "c",
                     sign > 0 ? "+" : "-"});
              }
      }
      break;
    }
  }
  return points;
}

struct PointResult {
  std::vector<CurrentSet> per_axis;
  std::vector<fields::MultipoleSet> multipoles;  // sym then anti, if requested
  std::optional<oracle::ATable> a_table;
  double oracle_dev = 0.0;  // max relative deviation, if checked
};

// Deviations are measured against the larger of the pair's own magnitude
// and the intrinsic current scale k*N, so a symmetry-forced zero with a
// rounding-level residue on both sides does not read as an O(1) error.
double rel_dev(const Vec3& a, const Vec3& b, double scale) {
  scale = std::max({scale, norm(a), norm(b)});
  if (scale < 1e-300) return 0.0;
  return norm(a - b) / scale;
}

double rel_dev(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  if (scale < 1e-300) return 0.0;
  return std::abs(a - b) / scale;
}

PointResult compute_point(const Scenario& s, const ScanPoint& p, bool check_oracle) {
  PointResult out;
  const PhotonField ph{PhotonField::circular(std::sqrt(s.photon.intensity), s.photon.xi,
                                             s.photon.omega_label)};
  const auto grid = sphharm::sphere_grid(currents::integrand_band(p.d.l_max()));
  for (const Vec3& axis : s.spin_axes)
    out.per_axis.push_back(
        currents::current_set(p.d, ph, sphharm::Direction::from_unit(axis), grid));

  if (s.output.multipoles) {
    const int l_report =
        s.output.lmax_report >= 0 ? s.output.lmax_report : 2 * p.d.l_max() + 1;
    const auto f = fields::field_samples(p.d, grid);
    out.multipoles.push_back(fields::moments(f, fields::FieldSelect::sym, l_report));
    out.multipoles.push_back(fields::moments(f, fields::FieldSelect::anti, l_report));
  }

  if (s.output.a_table) {
    const int l_k = 2, l_s = 2;
    out.a_table = oracle::a_coefficients(
        p.d, ph, sphharm::sphere_grid(2 * p.d.l_max() + l_k), sphharm::sphere_grid(1 + l_s),
        sphharm::euler_grid(oracle::euler_band_for_a(p.d.l_max())), l_k, l_s);
  }

  if (check_oracle) {
    const auto eg = sphharm::euler_grid(oracle::euler_band_for_current());
    const double scale = out.per_axis.front().yield * p.d.k();
    double dev = 0.0;
    const Vec3 net = oracle::oracle_current(p.d, ph, {0, 0, 1}, grid, eg, false);
    dev = std::max(dev, rel_dev(net, out.per_axis.front().j_pecd, scale));
    for (std::size_t i = 0; i < s.spin_axes.size(); ++i) {
      const Vec3 cond = oracle::oracle_current(p.d, ph, s.spin_axes[i], grid, eg, true);
      const CurrentSet& cs = out.per_axis[i];
      dev = std::max(dev, rel_dev(cond, cs.j_cross + cs.j_par + cs.j_perp, scale));
    }
    const double n_oracle = oracle::oracle_total_yield(
        p.d, ph, grid, sphharm::sphere_grid(2), sphharm::euler_grid(2));
    dev = std::max(dev, rel_dev(n_oracle, out.per_axis.front().yield));
    out.oracle_dev = dev;
  }
  return out;
}

const char* kBaseColumns =
    "k,phi_mix,mix_type,mix_sign,xi,s_x,s_y,s_z,"
    "j_pecd_x,j_pecd_y,j_pecd_z,j_cross_x,j_cross_y,j_cross_z,"
    "j_par_x,j_par_y,j_par_z,j_perp_x,j_perp_y,j_perp_z,"
    "m_pecd,m_cross,m_par,m_perp,yield";
const char* kPerNColumns = ",jn_pecd,jn_cross,jn_par,jn_perp";

void write_csv(std::ostream& out, const Scenario& s, const std::vector<ScanPoint>& points,
               const std::vector<PointResult>& results) {
  out << kBaseColumns << (s.output.per_n ? kPerNColumns : "") << "\n";
  for (std::size_t ip = 0; ip < points.size(); ++ip) {
    const ScanPoint& p = points[ip];
    for (const CurrentSet& cs : results[ip].per_axis) {
      out << fmt(cs.k) << ',';
      out << (std::isnan(p.phi_mix) ? "" : fmt(p.phi_mix)) << ',';
      out << p.mix_type << ',' << p.mix_sign << ',';
      out << cs.xi << ',';
      out << fmt(cs.s_axis.x) << ',' << fmt(cs.s_axis.y) << ',' << fmt(cs.s_axis.z) << ',';
      for (const Vec3* j : {&cs.j_pecd, &cs.j_cross, &cs.j_par, &cs.j_perp})
        out << fmt(j->x) << ',' << fmt(j->y) << ',' << fmt(j->z) << ',';
      out << fmt(cs.m_pecd) << ',' << fmt(cs.m_cross) << ',' << fmt(cs.m_par) << ','
          << fmt(cs.m_perp) << ',' << fmt(cs.yield);
      if (s.output.per_n) {
        for (double jn : {cs.jn_pecd, cs.jn_cross, cs.jn_par, cs.jn_perp})
          out << ',' << (std::isnan(jn) ? "" : fmt(jn));
      }
      out << '\n';
    }
  }
}

json vec_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

json multipole_json(const fields::MultipoleSet& m, const char* field) {
  json out;
  out["field"] = field;
  out["omega"] = vec_json(m.omega);
  out["b_par"] = m.b_par;
  out["l_report"] = m.l_report;
  json rows = json::array();
  for (int l = 0; l <= m.l_report; ++l)
    for (int mm = -l; mm <= l; ++mm) {
      json r;
      r["l"] = l;
      r["m"] = mm;
      r["par"] = json::array({m.par(l, mm).real(), m.par(l, mm).imag()});
      r["perp1"] = json::array({m.perp1(l, mm).real(), m.perp1(l, mm).imag()});
      r["perp2"] = json::array({m.perp2(l, mm).real(), m.perp2(l, mm).imag()});
      rows.push_back(std::move(r));
    }
  out["moments"] = std::move(rows);
  return out;
}

json build_json(const Scenario& s, const std::vector<ScanPoint>& points,
                const std::vector<PointResult>& results) {
  json root;
  root["rows"] = json::array();
  for (std::size_t ip = 0; ip < points.size(); ++ip) {
    const ScanPoint& p = points[ip];
    for (const CurrentSet& cs : results[ip].per_axis) {
      json r;
      r["k"] = cs.k;
      r["phi_mix"] = std::isnan(p.phi_mix) ? json(nullptr) : json(p.phi_mix);
      r["mix_type"] = p.mix_type.empty() ? json(nullptr) : json(p.mix_type);
      r["mix_sign"] = p.mix_sign.empty() ? json(nullptr) : json(p.mix_sign);
      r["xi"] = cs.xi;
      r["s"] = vec_json(cs.s_axis);
      r["j_pecd"] = vec_json(cs.j_pecd);
      r["j_cross"] = vec_json(cs.j_cross);
      r["j_par"] = vec_json(cs.j_par);
      r["j_perp"] = vec_json(cs.j_perp);
      r["m_pecd"] = cs.m_pecd;
      r["m_cross"] = cs.m_cross;
      r["m_par"] = cs.m_par;
      r["m_perp"] = cs.m_perp;
      r["yield"] = cs.yield;
      if (s.output.per_n) {
        r["jn_pecd"] = std::isnan(cs.jn_pecd) ? json(nullptr) : json(cs.jn_pecd);
        r["jn_cross"] = std::isnan(cs.jn_cross) ? json(nullptr) : json(cs.jn_cross);
        r["jn_par"] = std::isnan(cs.jn_par) ? json(nullptr) : json(cs.jn_par);
        r["jn_perp"] = std::isnan(cs.jn_perp) ? json(nullptr) : json(cs.jn_perp);
      }
      root["rows"].push_back(std::move(r));
    }
  }

  if (s.output.multipoles) {
    root["multipoles"] = json::array();
    for (std::size_t ip = 0; ip < points.size(); ++ip) {
      json entry;
      entry["point"] = ip;
      entry["k"] = points[ip].d.k();
      entry["sym"] = multipole_json(results[ip].multipoles[0], "sym");
      entry["anti"] = multipole_json(results[ip].multipoles[1], "anti");
      root["multipoles"].push_back(std::move(entry));
    }
  }

  if (s.output.a_table) {
    root["a_table"] = json::array();
    for (std::size_t ip = 0; ip < points.size(); ++ip) {
      const oracle::ATable& a = *results[ip].a_table;
      json entry;
      entry["point"] = ip;
      entry["l_k"] = a.l_k;
      entry["l_s"] = a.l_s;
      json rows = json::array();
      for (int l = 0; l <= a.l_k; ++l)
        for (int ml = -l; ml <= l; ++ml)
          for (int ls = 0; ls <= a.l_s; ++ls)
            for (int ms = -ls; ms <= ls; ++ms) {
              const cplx v = a.at(l, ml, ls, ms);
              rows.push_back(json{{"l", l},
                                  {"ml", ml},
                                  {"ls", ls},
                                  {"ms", ms},
                                  {"re", v.real()},
                                  {"im", v.imag()}});
            }
      entry["a"] = std::move(rows);
      root["a_table"].push_back(std::move(entry));
    }
  }
  return root;
}

void write_output_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path + ": cannot open for writing");
  out << text;
  if (!out) throw IoError(path + ": write failed");
}

}  // namespace

int run(const Scenario& s, const RunOptions& opt, std::ostream& diag) {
  std::vector<ScanPoint> points;
  try {
    points = scan_points(s);
  } catch (const std::runtime_error& e) {
    diag << "error: " << e.what() << "\n";
    return exit_io;
  }

  // Scan points are independent; compute them in waves of opt.threads.
  // Values never depend on the thread count.
  std::vector<PointResult> results(points.size());
  const int threads = std::max(1, opt.threads);
  try {
    if (threads == 1) {
      for (std::size_t i = 0; i < points.size(); ++i)
        results[i] = compute_point(s, points[i], opt.check_oracle);
    } else {
      for (std::size_t base = 0; base < points.size(); base += std::size_t(threads)) {
        const std::size_t end = std::min(points.size(), base + std::size_t(threads));
        std::vector<std::future<PointResult>> wave;
        for (std::size_t i = base; i < end; ++i)
          wave.push_back(std::async(std::launch::async, [&s, &points, i, &opt]() {
            return compute_point(s, points[i], opt.check_oracle);
          }));
        for (std::size_t i = base; i < end; ++i) results[i] = wave[i - base].get();
      }
    }
  } catch (const std::exception& e) {
    diag << "error: " << e.what() << "\n";
    return exit_io;
  }

  std::string text;
  std::string aux;
  if (s.output.format == OutputSpec::Format::csv) {
    std::ostringstream os;
    write_csv(os, s, points, results);
    text = os.str();
    if (s.output.multipoles || s.output.a_table) {
      Scenario aux_only = s;
      json root = build_json(aux_only, points, results);
      root.erase("rows");
      aux = root.dump(2) + "\n";
    }
  } else {
    text = build_json(s, points, results).dump(2) + "\n";
  }

  try {
    if (s.output.path.empty()) {
      std::cout << text;
    } else {
      write_output_file(s.output.path, text);
      if (!aux.empty()) write_output_file(s.output.path + ".aux.json", aux);
    }
  } catch (const IoError& e) {
    diag << "error: " << e.what() << "\n";
    return exit_io;
  }

  if (opt.check_oracle) {
    double dev = 0.0;
    for (const PointResult& r : results) dev = std::max(dev, r.oracle_dev);
    diag << "oracle check: max relative deviation = " << fmt(dev) << "\n";
    if (!(dev <= 1e-9)) {
      diag << "oracle check FAILED (tolerance 1e-9)\n";
      return exit_oracle;
    }
  }
  return exit_ok;
}

}  // namespace spincur::cli
