// Command line front end: tabulates Green functions, band structures,
// generalized eigenfunctions, scattering channels, the rational-approximation
// limit study, and runs the invariant suite.

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "maryland/bands.hpp"
#include "maryland/oracle.hpp"
#include "maryland/resolvent.hpp"
#include "maryland/scattering.hpp"
#include "maryland/verify.hpp"

using json = nlohmann::ordered_json;
using namespace maryland;

namespace {

// 17 significant digits, '.' decimal separator.
std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct CsvWriter {
  std::ofstream out;
  explicit CsvWriter(const std::string& path, const std::string& header) : out(path) {
    if (!out) throw BadConfig("cannot open output file " + path);
    out << header << "\n";
  }
  void row(const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << "\n";
  }
};

struct ModelOpts {
  int d1 = 1, d2 = 1;
  double g = 1.0;
  double omega = 0.2;
  long ap = 0, aq = 0;       // rational alpha when aq > 0
  double airr = -1.0;        // irrational alpha when >= 0
  void attach(CLI::App* cmd) {
    cmd->add_option("--d1", d1, "transverse dimension");
    cmd->add_option("--d2", d2, "surface dimension");
    cmd->add_option("--g", g, "coupling constant (> 0)");
    cmd->add_option("--omega", omega, "phase in [0,1)");
    cmd->add_option("--p", ap, "rational frequency numerator");
    cmd->add_option("--q", aq, "rational frequency denominator (enables p/q)");
    cmd->add_option("--alpha", airr, "irrational frequency (default: golden mean)");
  }
  ModelParams params() const {
    ModelParams p;
    p.d1 = d1;
    p.d2 = d2;
    p.g = g;
    p.omega = omega;
    if (aq > 0)
      p.alpha = Alpha::make_rational(ap, aq);
    else if (airr >= 0.0)
      p.alpha = Alpha::make_irrational(airr);
    else
      p.alpha = Alpha::golden();
    p.validate();
    return p;
  }
};

json params_json(const ModelParams& p) {
  json a;
  a["rational"] = p.alpha.rational;
  if (p.alpha.rational) {
    a["p"] = p.alpha.p;
    a["q"] = p.alpha.q;
  }
  std::vector<double> av(p.alpha.value.c.begin(), p.alpha.value.c.begin() + p.alpha.dim());
  a["value"] = av;
  return json{{"d1", p.d1}, {"d2", p.d2}, {"g", p.g}, {"omega", p.omega}, {"alpha", a}};
}

struct Summary {
  json j;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  Summary(const std::string& command) {
    j["schema_version"] = 1;
    j["command"] = command;
    j["outputs"] = json::array();
    j["invariant_results"] = json::array();
  }
  void output(const std::string& path) { j["outputs"].push_back(path); }
  void finish(const std::string& dir) {
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    j["timings"] = {{"total_seconds", secs}};
    std::ofstream f(dir + "/summary.json");
    f << j.dump(2) << "\n";
  }
};

std::string out_dir(const std::string& cli_value) {
  if (!cli_value.empty()) return cli_value;
  if (const char* env = std::getenv("MARYLAND_OUTDIR")) return env;
  return ".";
}

Side parse_side(const std::string& s) {
  if (s == "upper") return Side::upper;
  if (s == "lower") return Side::lower;
  throw BadConfig("side must be 'upper' or 'lower'");
}

int cmd_green(const ModelOpts& mo, int nu, std::vector<int> xs, double E, double eps,
              const std::string& side, int ecount, double emin, double emax, bool full,
              std::vector<int> xfull, std::vector<int> yfull, const std::string& dir) {
  Summary sm("green");
  ModelParams p = mo.params();
  sm.j["params"] = params_json(p);

  auto energy = [&](double e) {
    return eps > 0 ? ComplexEnergy::off({e, eps}) : ComplexEnergy::boundary(e, parse_side(side));
  };

  std::string path = dir + "/green.csv";
  if (!full) {
    while (int(xs.size()) < nu) xs.push_back(0);
    XVec x;
    x.n = nu;
    for (int i = 0; i < nu; ++i) x.c[i] = xs[i];
    CsvWriter csv(path, "nu,x0,x1,x2,E,eps,side,re,im,err");
    std::vector<double> grid;
    if (ecount > 1)
      for (int i = 0; i < ecount; ++i) grid.push_back(emin + (emax - emin) * i / (ecount - 1));
    else
      grid.push_back(E);
    for (double e : grid) {
      GreenValue g = green_nd(nu, x, energy(e), 1e-10);
      csv.row({std::to_string(nu), std::to_string(x.c[0]), std::to_string(nu > 1 ? x.c[1] : 0),
               std::to_string(nu > 2 ? x.c[2] : 0), num(e), num(eps), side, num(g.value.real()),
               num(g.value.imag()), num(g.err)});
      if (grid.size() == 1)
        std::printf("G0^(%d)(x; z) = %.7f %+.7fi  (err %.2e)\n", nu, g.value.real(),
                    g.value.imag(), g.err);
    }
  } else {
    if (xfull.size() != size_t(p.d()) || yfull.size() != size_t(p.d()))
      throw BadConfig("--xfull/--yfull need d components");
    XVec x, y;
    x.n = y.n = p.d();
    for (int i = 0; i < p.d(); ++i) {
      x.c[i] = xfull[i];
      y.c[i] = yfull[i];
    }
    GreenValue g = p.alpha.rational ? green_full_periodic(x, y, energy(E), p)
                                    : green_full_qp(x, y, energy(E), p);
    CsvWriter csv(path, "x0,x1,y0,y1,E,eps,side,re,im,err");
    csv.row({std::to_string(x.c[0]), std::to_string(x.c[1]), std::to_string(y.c[0]),
             std::to_string(y.c[1]), num(E), num(eps), side, num(g.value.real()),
             num(g.value.imag()), num(g.err)});
    std::printf("G(x,y;z) = %.10f %+.10fi  (err %.2e)\n", g.value.real(), g.value.imag(), g.err);
  }
  sm.output(path);
  sm.finish(dir);
  return 0;
}

int cmd_bands(const ModelOpts& mo, int samples, int maxj, const std::string& dir) {
  Summary sm("bands");
  ModelParams p = mo.params();
  sm.j["params"] = params_json(p);
  if (!p.alpha.rational) throw BadConfig("bands needs rational alpha (--p/--q)");

  std::string path = dir + "/bands.csv";
  CsvWriter csv(path, "j,k2,E,in_domain");
  BandDiagnostics diag = band_diagnostics(p, samples);
  for (auto& info : diag.bands) {
    BandFunction bf = band_curve(info.j, p, samples);
    // Emit the sampled curve; unsolvable grid points carry in_domain = 0.
    const double left = 0.5 - 0.5 / double(p.alpha.q);
    for (int i = 0; i < samples; ++i) {
      double k2 = left + (i + 0.5) / double(samples) / double(p.alpha.q);
      auto it = std::find_if(bf.samples.begin(), bf.samples.end(),
                             [&](auto& s) { return std::abs(s.first - k2) < 1e-12; });
      if (it != bf.samples.end())
        csv.row({std::to_string(info.j), num(k2), num(it->second), "1"});
      else
        csv.row({std::to_string(info.j), num(k2), "nan", "0"});
    }
  }
  sm.output(path);

  Spectrum sp = assemble_spectrum(p, maxj);
  json intervals = json::array();
  for (auto& iv : sp.intervals)
    intervals.push_back({{"lo", iv.lo}, {"hi", iv.hi}, {"provenance", iv.provenance}});
  sm.j["spectrum"] = intervals;

  json bands = json::array();
  for (auto& b : diag.bands)
    bands.push_back({{"j", b.j}, {"emin", b.emin}, {"emax", b.emax}, {"width", b.width}});
  sm.j["diagnostics"] = {{"bands", bands},
                         {"min_separation", diag.min_separation},
                         {"delta_phi", diag.delta_phi},
                         {"phi_fourier", diag.phi_fourier}};
  std::printf("bands: %zu, spectrum intervals: %zu, min separation %.3e\n",
              diag.bands.size(), sp.intervals.size(), diag.min_separation);
  sm.finish(dir);
  return 0;
}

int cmd_states(const ModelOpts& mo, const std::string& kind, double k1, double k2, int j,
               const std::string& sign_s, int window, const std::string& dir) {
  Summary sm("states");
  ModelParams p = mo.params();
  sm.j["params"] = params_json(p);
  StateSign sign = sign_s == "plus" ? StateSign::plus : StateSign::minus;

  ScatteringState st = [&] {
    if (kind == "qp") return psi_qp(KVec{k1, k2}, sign, p);
    if (kind == "volume") return psi_periodic_volume(KVec{k1, k2}, sign, p);
    if (kind == "surface") return psi_periodic_surface(k2, j, sign, p);
    throw BadConfig("kind must be qp|volume|surface");
  }();

  auto split = split_volume_surface(st);
  ScatteringState vol = st, surf = st;
  vol.terms = split.first;
  surf.terms = split.second;
  surf.has_plane_wave = false;

  std::string path = dir + "/states.csv";
  CsvWriter csv(path, "x1,x2,re,im,class");
  for (int x1 = -window; x1 <= window; ++x1)
    for (int x2 = -window; x2 <= window; ++x2) {
      XVec x{x1, x2};
      Complex f = st.eval(x), v = vol.eval(x), s = surf.eval(x);
      csv.row({std::to_string(x1), std::to_string(x2), num(f.real()), num(f.imag()), "full"});
      csv.row({std::to_string(x1), std::to_string(x2), num(v.real()), num(v.imag()), "volume"});
      csv.row({std::to_string(x1), std::to_string(x2), num(s.real()), num(s.imag()), "surface"});
    }
  sm.output(path);

  double resid = schrodinger_residual(st.evaluator(), st.energy, p, std::min(window, 10));
  sm.j["residual"] = resid;
  sm.j["energy"] = st.energy;
  std::printf("E = %.12f, Schrodinger residual on |x|<=%d: %.3e\n", st.energy,
              std::min(window, 10), resid);
  sm.finish(dir);
  return 0;
}

int cmd_scatter(const ModelOpts& mo, double k1, double k2, const std::string& dir) {
  Summary sm("scatter");
  ModelParams p = mo.params();
  sm.j["params"] = params_json(p);

  ScatteringState st = psi_qp(KVec{k1, k2}, StateSign::minus, p);
  Amplitudes amp = amplitudes(KVec{k1, k2}, p);

  std::string path = dir + "/channels.csv";
  CsvWriter csv(path, "m,lambda,eta_re,eta_im,amp_re,amp_im,class");
  for (auto& t : st.terms)
    csv.row({std::to_string(t.m), num(t.lambda), num(t.eta_m.real()), num(t.eta_m.imag()),
             num(t.amplitude.real()), num(t.amplitude.imag()),
             t.cls == ChannelClass::volume ? "volume" : "surface"});
  sm.output(path);

  sm.j["t0"] = {amp.t0.real(), amp.t0.imag()};
  sm.j["r0"] = {amp.r0.real(), amp.r0.imag()};
  sm.j["open_channels"] = amp.open_channels.size();
  std::printf("t0 = %.8f %+.8fi, r0 = %.8f %+.8fi, open channels: %zu\n", amp.t0.real(),
              amp.t0.imag(), amp.r0.real(), amp.r0.imag(), amp.open_channels.size());
  sm.finish(dir);
  return 0;
}

int cmd_limit(const ModelOpts& mo, double alpha_target, int n_convergents,
              std::vector<int> x2s, const std::string& dir) {
  Summary sm("limit");
  ModelParams p = mo.params();
  sm.j["params"] = params_json(p);

  // Continued-fraction convergents of the target frequency.
  std::vector<std::pair<long, long>> conv;
  {
    double x = alpha_target;
    long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    for (int i = 0; i < 24 && int(conv.size()) < n_convergents; ++i) {
      long a = long(std::floor(x));
      long h2 = a * h1 + h0, k2 = a * k1 + k0;
      h0 = h1;
      h1 = h2;
      k0 = k1;
      k1 = k2;
      if (k1 >= 2) conv.push_back({h1, k1});
      double frac = x - double(a);
      if (frac < 1e-15) break;
      x = 1.0 / frac;
    }
  }

  auto rows = limit_comparison(alpha_target, conv, x2s, p);
  std::string path = dir + "/limit.csv";
  CsvWriter csv(path, "n,p,q,x2,E_diophantine,band_mid,distance");
  for (auto& r : rows)
    csv.row({std::to_string(r.n), std::to_string(r.p), std::to_string(r.q),
             std::to_string(r.x2), r.has_root ? num(r.E_diophantine) : "nan",
             r.has_root ? num(r.band_mid) : "nan", r.has_root ? num(r.distance) : "nan"});
  sm.output(path);
  std::printf("limit table: %zu rows over %zu convergents\n", rows.size(), conv.size());
  sm.finish(dir);
  return 0;
}

int cmd_verify(const std::string& suite, const std::string& dir) {
  Summary sm("verify");
  auto results = verify::run_suite(suite);
  int fails = 0;
  for (auto& r : results) {
    std::printf("[%s] %-42s value %.3e tol %.3e\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                r.value, r.tol);
    sm.j["invariant_results"].push_back(
        {{"name", r.name}, {"pass", r.pass}, {"value", r.value}, {"tol", r.tol}});
    if (!r.pass) ++fails;
  }
  std::printf("%d/%zu checks passed\n", int(results.size()) - fails, results.size());
  sm.finish(dir);
  return fails == 0 ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"surface Maryland model laboratory"};
  app.set_config("--config", "", "flat key=value configuration file");
  app.require_subcommand(1);

  std::string dir_opt;
  app.add_option("--outdir", dir_opt, "output directory (or MARYLAND_OUTDIR)");

  ModelOpts mo;

  auto* green = app.add_subcommand("green", "tabulate free and full Green functions");
  mo.attach(green);
  int nu = 1, ecount = 1;
  std::vector<int> xs{0}, xfull, yfull;
  double E = 0.0, eps = 0.0, emin = -3.0, emax = 3.0;
  std::string side = "upper";
  bool full = false;
  green->add_option("--nu", nu, "free Green function dimension");
  green->add_option("--x", xs, "lattice point components");
  green->add_option("--E", E, "real energy");
  green->add_option("--eps", eps, "imaginary part of z (0 = boundary)");
  green->add_option("--side", side, "boundary side: upper | lower");
  green->add_option("--E-count", ecount, "tabulate this many energies");
  green->add_option("--E-min", emin);
  green->add_option("--E-max", emax);
  green->add_flag("--full", full, "full surface-model Green function");
  green->add_option("--xfull", xfull, "x for --full (d components)");
  green->add_option("--yfull", yfull, "y for --full (d components)");

  auto* bands = app.add_subcommand("bands", "band functions, spectrum, diagnostics");
  mo.attach(bands);
  int samples = 512, maxj = 64;
  bands->add_option("--samples", samples, "samples per 1/q period");
  bands->add_option("--max-j", maxj, "band index scan cap");

  auto* states = app.add_subcommand("states", "generalized eigenfunctions on a window");
  mo.attach(states);
  std::string kind = "qp", sign_s = "minus";
  double k1 = 0.2, k2 = 0.3;
  int jband = 1, window = 10;
  states->add_option("--kind", kind, "qp | volume | surface");
  states->add_option("--k1", k1);
  states->add_option("--k2", k2);
  states->add_option("--j", jband, "band index (surface states)");
  states->add_option("--sign", sign_s, "plus | minus");
  states->add_option("--window", window);

  auto* scatter = app.add_subcommand("scatter", "channel table and amplitudes");
  mo.attach(scatter);
  double sk1 = 0.2, sk2 = 0.3;
  scatter->add_option("--k1", sk1);
  scatter->add_option("--k2", sk2);

  auto* limit = app.add_subcommand("limit", "rational-approximation limit table");
  mo.attach(limit);
  double alpha_target = 0.61803398874989484820;
  int ncv = 6;
  std::vector<int> x2s{0, 1, -1};
  limit->add_option("--alpha-target", alpha_target);
  limit->add_option("--convergents", ncv, "number of convergents");
  limit->add_option("--x2", x2s, "surface sites to track");

  auto* verify_cmd = app.add_subcommand("verify", "run the invariant suite");
  std::string suite = "trivial";
  verify_cmd->add_option("--suite", suite, "trivial | full");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    std::string dir = out_dir(dir_opt);
    std::filesystem::create_directories(dir);
    if (green->parsed())
      return cmd_green(mo, nu, xs, E, eps, side, ecount, emin, emax, full, xfull, yfull, dir);
    if (bands->parsed()) return cmd_bands(mo, samples, maxj, dir);
    if (states->parsed()) return cmd_states(mo, kind, k1, k2, jband, sign_s, window, dir);
    if (scatter->parsed()) return cmd_scatter(mo, sk1, sk2, dir);
    if (limit->parsed()) return cmd_limit(mo, alpha_target, ncv, x2s, dir);
    if (verify_cmd->parsed()) return cmd_verify(suite, dir);
  } catch (const BadConfig& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const NumericError& e) {
    std::fprintf(stderr, "numeric failure: %s\n", e.what());
    return 3;
  }
  return 2;
}
