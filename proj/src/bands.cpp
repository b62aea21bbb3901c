#include "maryland/bands.hpp"

#include <algorithm>
#include <cmath>

namespace maryland {

namespace {

void require_periodic(const ModelParams& p) {
  if (!p.alpha.rational || p.d1 != 1 || p.d2 != 1)
    throw BadConfig("band machinery needs rational alpha and d1 = d2 = 1");
}

// Parameters whose positive bands are the mirrored negative bands of p.
ModelParams staggered_map(const ModelParams& p) {
  ModelParams m = p;
  m.alpha = Alpha::make_rational(p.alpha.q - p.alpha.p, p.alpha.q);
  m.omega = mod1(1.0 - p.omega);
  return m;
}

double window_left(const ModelParams& p) { return 0.5 - 0.5 / double(p.alpha.q); }

struct BandTarget {
  long a_omega;
  double target(int j, const ModelParams& p) const {
    return double(p.alpha.q) * p.omega + double(a_omega) + double(j);
  }
};

std::optional<double> solve_with_target(double k2, double target, const ModelParams& p) {
  const long q = p.alpha.q;
  const double Elo = threshold_energy(k2, p);
  const double philo = phase_Phi_q(k2, Elo, p);
  if (target < philo - 1e-12) return std::nullopt;
  if (target >= 0.5 * double(q) - 1e-12) return std::nullopt;

  double lo = Elo, hi = Elo + 1.0;
  int grow = 0;
  while (phase_Phi_q(k2, hi, p) < target) {
    hi = Elo + 2.0 * (hi - Elo);
    if (++grow > 60) throw SolveFailure("band bracket did not close");
  }
  // Safeguarded Newton with bisection fallback.
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    double f = phase_Phi_q(k2, x, p) - target;
    if (std::abs(f) < 1e-13) return x;
    if (f > 0)
      hi = x;
    else
      lo = x;
    double der = phase_Phi_q_dE(k2, x, p);
    double xn = x - f / der;
    if (!(xn > lo && xn < hi) || !std::isfinite(xn)) xn = 0.5 * (lo + hi);
    if (std::abs(xn - x) < 1e-14 * std::max(1.0, std::abs(x))) return xn;
    x = xn;
  }
  throw ConvergenceFailure("band solve exceeded 200 iterations");
}

}  // namespace

double phase_phi(double k2, double E, double g) {
  double lam = E + std::cos(2.0 * pi * k2);
  if (lam < 1.0 - 1e-12)
    throw OutsideDomain("phase_phi needs E >= 1 - cos(2 pi k2)");
  double s = std::sqrt(std::max(0.0, lam * lam - 1.0));
  return std::atan(s / g) / pi;
}

double threshold_energy(double k2, const ModelParams& p) {
  double m = -1e300;
  for (long l = 1; l <= p.alpha.q; ++l)
    m = std::max(m, 1.0 - std::cos(2.0 * pi * p.shift_k2(KVec{k2}, l).c[0]));
  return m;
}

double phase_Phi_q(double k2, double E, const ModelParams& p) {
  require_periodic(p);
  double s = 0.0;
  for (long l = 1; l <= p.alpha.q; ++l)
    s += phase_phi(p.shift_k2(KVec{k2}, l).c[0], E, p.g);
  return s;
}

double phase_Phi_q_dE(double k2, double E, const ModelParams& p) {
  require_periodic(p);
  double s = 0.0;
  for (long l = 1; l <= p.alpha.q; ++l) {
    double lam = E + std::cos(2.0 * pi * p.shift_k2(KVec{k2}, l).c[0]);
    double t = lam * lam - 1.0;
    if (t <= 0.0) return std::numeric_limits<double>::infinity();
    s += p.g / (p.g * p.g + t) * lam / std::sqrt(t);
  }
  return s / pi;
}

long alpha_omega_offset(const ModelParams& p) {
  require_periodic(p);
  const long q = p.alpha.q;
  const double left = window_left(p);
  const int n = 2048;
  double mn = 1e300;
  for (int i = 0; i <= n; ++i) {
    double k = left + double(i) / n / double(q);
    mn = std::min(mn, phase_Phi_q(k, threshold_energy(k, p), p));
  }
  return (long)std::floor(mn - double(q) * p.omega);
}

std::optional<double> solve_band(int j, double k2, const ModelParams& p) {
  require_periodic(p);
  if (j == 0) throw BadConfig("band index j must be nonzero");
  if (j < 0) {
    ModelParams m = staggered_map(p);
    auto e = solve_band(-j, mod1(k2 + 0.5), m);
    if (!e) return std::nullopt;
    return -*e;
  }
  BandTarget bt{alpha_omega_offset(p)};
  return solve_with_target(k2, bt.target(j, p), p);
}

namespace {

// Energy at the vertex of the parabola through three equally spaced samples.
double parabola_vertex(double e0, double e1, double e2) {
  double delta = 0.5 * (e2 - e0);
  double curv = e0 - 2.0 * e1 + e2;
  if (curv == 0.0) return e1;
  return e1 - delta * delta / (2.0 * curv);
}

}  // namespace

BandFunction band_curve(int j, const ModelParams& p, int n_samples) {
  require_periodic(p);
  if (n_samples < 16) throw BadConfig("band_curve needs n_samples >= 16");
  if (j == 0) throw BadConfig("band index j must be nonzero");

  BandFunction bf;
  bf.j = j;
  bf.q = p.alpha.q;

  const bool neg = j < 0;
  const ModelParams pm = neg ? staggered_map(p) : p;
  const double shift = neg ? 0.5 : 0.0;
  BandTarget bt{alpha_omega_offset(pm)};
  const double target = bt.target(std::abs(j), pm);

  const double left = window_left(p), width = 1.0 / double(p.alpha.q);
  auto solvable = [&](double k) {
    double km = mod1(k + shift);
    return target >= phase_Phi_q(km, threshold_energy(km, pm), pm) - 1e-12;
  };
  auto solve_at = [&](double k) -> std::optional<double> {
    auto e = solve_with_target(mod1(k + shift), target, pm);
    if (!e) return std::nullopt;
    return neg ? -*e : *e;
  };

  std::vector<char> ok(n_samples);
  std::vector<double> ks(n_samples);
  for (int i = 0; i < n_samples; ++i) {
    double k = left + (i + 0.5) * width / n_samples;
    ks[i] = k;
    auto e = solve_at(k);
    ok[i] = e.has_value();
    if (e) bf.samples.push_back({k, *e});
  }

  // Domain intervals and threshold-touching points from the solvability
  // indicator; boundaries refined by bisection to 1e-9.
  auto refine = [&](double a, double b) {  // solvable(a) != solvable(b)
    for (int it = 0; it < 60 && b - a > 1e-10; ++it) {
      double m = 0.5 * (a + b);
      if (solvable(m) == solvable(a))
        a = m;
      else
        b = m;
    }
    return 0.5 * (a + b);
  };
  int i = 0;
  while (i < n_samples) {
    if (!ok[i]) {
      ++i;
      continue;
    }
    int lo = i;
    while (i + 1 < n_samples && ok[i + 1]) ++i;
    int hi = i;
    double a = (lo == 0) ? left : refine(ks[lo - 1], ks[lo]);
    double b = (hi == n_samples - 1) ? left + width : refine(ks[hi + 1], ks[hi]);
    if (b < a) std::swap(a, b);
    bf.domain.push_back({a, b});
    if (lo != 0) bf.excluded.push_back(a);
    if (hi != n_samples - 1) bf.excluded.push_back(b);
    ++i;
  }

  // Range and stationary points refined past the grid: parabola vertices at
  // interior sign changes of the sampled derivative (circular when the band
  // covers the whole window) and exact threshold energies at the detected
  // domain boundaries.
  double elo = 1e300, ehi = -1e300;
  for (auto& s : bf.samples) {
    elo = std::min(elo, s.second);
    ehi = std::max(ehi, s.second);
  }
  const size_t ns = bf.samples.size();
  const bool full = bf.domain.size() == 1 &&
                    std::abs((bf.domain[0].second - bf.domain[0].first) - width) < 1e-9;
  auto contiguous = [&](size_t a, size_t b) {
    double gap = std::abs(bf.samples[b].first - bf.samples[a].first);
    if (full) gap = std::min(gap, width - gap);
    return gap < 1.5 * width / n_samples;
  };
  for (size_t c = 0; c < ns; ++c) {
    if (!full && (c == 0 || c + 1 == ns)) continue;
    size_t cm = (c + ns - 1) % ns, cp = (c + 1) % ns;
    if (!contiguous(cm, c) || !contiguous(c, cp)) continue;
    double d1 = bf.samples[c].second - bf.samples[cm].second;
    double d2 = bf.samples[cp].second - bf.samples[c].second;
    if (d1 * d2 <= 0.0 && (d1 != 0.0 || d2 != 0.0)) {
      double ev = parabola_vertex(bf.samples[cm].second, bf.samples[c].second,
                                  bf.samples[cp].second);
      bf.stationary.push_back({bf.samples[c].first, ev});
      elo = std::min(elo, ev);
      ehi = std::max(ehi, ev);
    }
  }
  for (double kb : bf.excluded) {
    double ev = threshold_energy(mod1(kb + shift), pm);
    if (neg) ev = -ev;
    elo = std::min(elo, ev);
    ehi = std::max(ehi, ev);
  }
  bf.lo = elo;
  bf.hi = ehi;
  return bf;
}

bool Spectrum::contains(double E, double tol) const {
  for (auto& iv : intervals)
    if (E >= iv.lo - tol && E <= iv.hi + tol) return true;
  return false;
}

Spectrum assemble_spectrum(const ModelParams& p, int max_j_scan) {
  require_periodic(p);
  std::vector<SpectrumInterval> raw;
  raw.push_back({-2.0, 2.0, {"laplacian"}});

  auto add_sign = [&](int sign) {
    for (int j = 1; j <= max_j_scan; ++j) {
      BandFunction bf = band_curve(sign * j, p, 256);
      if (bf.empty()) {
        // Bands with larger |j| have strictly larger targets; once the
        // target passes q/2 nothing further is solvable.
        const ModelParams pm = sign > 0 ? p : staggered_map(p);
        BandTarget bt{alpha_omega_offset(pm)};
        if (bt.target(j, pm) >= 0.5 * double(p.alpha.q)) break;
        continue;
      }
      // One interval per connected component of the domain, refined by the
      // stationary vertices and the boundary threshold energies.
      const ModelParams pmm = sign > 0 ? p : staggered_map(p);
      for (auto& dom : bf.domain) {
        double lo = 1e300, hi = -1e300;
        auto inside = [&](double k2) {
          return k2 >= dom.first - 1e-12 && k2 <= dom.second + 1e-12;
        };
        for (auto& s : bf.samples)
          if (inside(s.first)) {
            lo = std::min(lo, s.second);
            hi = std::max(hi, s.second);
          }
        for (auto& st : bf.stationary)
          if (inside(st.first)) {
            lo = std::min(lo, st.second);
            hi = std::max(hi, st.second);
          }
        for (double kb : bf.excluded)
          if (std::abs(kb - dom.first) < 1e-9 || std::abs(kb - dom.second) < 1e-9) {
            double ev = threshold_energy(mod1(kb + (sign > 0 ? 0.0 : 0.5)), pmm);
            if (sign < 0) ev = -ev;
            lo = std::min(lo, ev);
            hi = std::max(hi, ev);
          }
        if (bf.domain.size() == 1) {
          lo = bf.lo;
          hi = bf.hi;
        }
        if (lo <= hi)
          raw.push_back({lo, hi, {"surface_band(" + std::to_string(sign * j) + ")"}});
      }
    }
  };
  add_sign(+1);
  add_sign(-1);

  std::sort(raw.begin(), raw.end(),
            [](const SpectrumInterval& a, const SpectrumInterval& b) { return a.lo < b.lo; });
  Spectrum sp;
  for (auto& iv : raw) {
    if (!sp.intervals.empty() && iv.lo <= sp.intervals.back().hi + 1e-12) {
      auto& last = sp.intervals.back();
      last.hi = std::max(last.hi, iv.hi);
      last.provenance.insert(last.provenance.end(), iv.provenance.begin(),
                             iv.provenance.end());
    } else {
      sp.intervals.push_back(iv);
    }
  }
  return sp;
}

BandDiagnostics band_diagnostics(const ModelParams& p, int n_samples) {
  require_periodic(p);
  const long q = p.alpha.q;
  BandDiagnostics d;

  std::vector<BandFunction> curves;
  for (int sign : {+1, -1}) {
    const ModelParams pm = sign > 0 ? p : staggered_map(p);
    BandTarget bt{alpha_omega_offset(pm)};
    for (int j = 1; j <= 2 * int(q) + 2; ++j) {
      if (bt.target(j, pm) >= 0.5 * double(q)) break;
      BandFunction bf = band_curve(sign * j, p, n_samples);
      if (bf.empty()) continue;
      curves.push_back(bf);
      d.bands.push_back({sign * j, bf.emin(), bf.emax(), bf.emax() - bf.emin()});
    }
  }

  // Separation between adjacent indices over shared sample points.
  double eta = 1e300;
  bool any = false;
  for (size_t a = 0; a < curves.size(); ++a)
    for (size_t b = 0; b < curves.size(); ++b) {
      if (curves[a].j + 1 != curves[b].j) continue;
      if (curves[a].j == -1 && curves[b].j == 1) continue;
      size_t ia = 0, ib = 0;
      while (ia < curves[a].samples.size() && ib < curves[b].samples.size()) {
        double ka = curves[a].samples[ia].first, kb = curves[b].samples[ib].first;
        if (std::abs(ka - kb) < 1e-12) {
          eta = std::min(eta, std::abs(curves[b].samples[ib].second -
                                       curves[a].samples[ia].second));
          any = true;
          ++ia;
          ++ib;
        } else if (ka < kb)
          ++ia;
        else
          ++ib;
      }
    }
  d.min_separation = any ? eta : 0.0;

  const double kstar = window_left(p);
  d.delta_phi = phase_Phi_q(kstar, 2.0, p) -
                phase_Phi_q(kstar, threshold_energy(kstar, p), p);

  // Fourier magnitudes of the single-channel phase at E = 3.
  const int N = 8192;
  for (int n = 0; n <= 2; ++n) {
    Complex c{0.0, 0.0};
    for (int i = 0; i < N; ++i) {
      double k = (i + 0.5) / N;
      c += phase_phi(k, 3.0, p.g) * std::exp(Complex(0.0, 2.0 * pi * k * n * q)) / double(N);
    }
    d.phi_fourier.push_back(std::abs(c));
  }
  return d;
}

std::vector<double> critical_energies(const ModelParams& p, int n_samples) {
  require_periodic(p);
  std::vector<double> out{-2.0, 2.0};

  BandDiagnostics d = band_diagnostics(p, n_samples);
  for (auto& info : d.bands) {
    BandFunction bf = band_curve(info.j, p, n_samples);
    for (auto& st : bf.stationary) out.push_back(st.second);
    // Domain boundaries sit on the threshold curve.
    for (double kb : bf.excluded) {
      double thr = threshold_energy(info.j > 0 ? kb : mod1(kb + 0.5),
                                    info.j > 0 ? p : staggered_map(p));
      out.push_back(info.j > 0 ? thr : -thr);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(),
                        [](double a, double b) { return std::abs(a - b) < 1e-7; }),
            out.end());
  return out;
}

std::vector<double> band_crossings(double E, const ModelParams& p) {
  require_periodic(p);
  const long q = p.alpha.q;
  ComplexEnergy z = ComplexEnergy::upper(E);

  auto pq = [&](double k) { return partial_product(q, KVec{k}, z, p); };

  // P_q is 1/q-periodic: locate roots of arg P_q = 0 (with |P_q| = 1) in one
  // period and replicate.
  std::vector<double> roots;
  const int n = 4096;
  const double w = 1.0 / double(q);
  double prev_h = std::arg(pq(0.0));
  double prev_a = std::abs(pq(0.0));
  for (int i = 1; i <= n; ++i) {
    double k = w * double(i) / n;
    Complex v = pq(std::min(k, w * (1.0 - 1e-12)));
    double h = std::arg(v), a = std::abs(v);
    if (prev_a > 1.0 - 1e-6 && a > 1.0 - 1e-6 && std::abs(h) < 1.5 &&
        std::abs(prev_h) < 1.5 && h * prev_h <= 0.0 && (h != 0.0 || prev_h != 0.0)) {
      double lo = w * double(i - 1) / n, hi = k;
      for (int it = 0; it < 80 && hi - lo > 1e-14; ++it) {
        double m = 0.5 * (lo + hi);
        if (std::arg(pq(m)) * prev_h > 0)
          lo = m;
        else
          hi = m;
      }
      roots.push_back(0.5 * (lo + hi));
    }
    prev_h = h;
    prev_a = a;
  }
  std::vector<double> out;
  for (double r : roots)
    for (long l = 0; l < q; ++l) out.push_back(mod1(r + double(l) * w));
  std::sort(out.begin(), out.end());
  return out;
}

double diophantine_f(double E, double g) {
  if (!(E > 2.0)) throw OutsideDomain("f defined on the positive side E > 2");
  const int N = 4096;
  double s = 0.0;
  for (int i = 0; i < N; ++i) s += phase_phi((i + 0.5) / N, E, g) / N;
  return s;
}

std::optional<double> diophantine_root(double target, double g) {
  double flo = diophantine_f(2.0 + 1e-9, g);
  if (target <= flo || target >= 0.5) return std::nullopt;
  double lo = 2.0 + 1e-9, hi = 3.0;
  while (diophantine_f(hi, g) < target) {
    hi = 2.0 + 2.0 * (hi - 2.0);
    if (hi > 1e9) return std::nullopt;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-11 * std::max(1.0, hi); ++it) {
    double m = 0.5 * (lo + hi);
    if (diophantine_f(m, g) < target)
      lo = m;
    else
      hi = m;
  }
  return 0.5 * (lo + hi);
}

std::vector<LimitRow> limit_comparison(double alpha_target,
                                       const std::vector<std::pair<long, long>>& convergents,
                                       const std::vector<int>& x2_range,
                                       const ModelParams& p) {
  std::vector<LimitRow> rows;
  int n_idx = 0;
  for (auto [pn, qn] : convergents) {
    ModelParams pc = p;
    pc.alpha = Alpha::make_rational(pn, qn);
    pc.validate();
    BandDiagnostics d = band_diagnostics(pc, 256);

    for (int x2 : x2_range) {
      LimitRow row;
      row.n = n_idx;
      row.p = pn;
      row.q = qn;
      row.x2 = x2;
      double tau = mod1(alpha_target * x2 + p.omega);
      std::optional<double> root = diophantine_root(tau, p.g);
      if (!root) {
        // Negative side: the staggered symmetry turns the rule into
        // f(|E|) = 1 - tau (mod 1).
        std::optional<double> rneg = diophantine_root(mod1(1.0 - tau), p.g);
        if (rneg) root = -*rneg;
      }
      if (!root) {
        rows.push_back(row);
        continue;
      }
      row.has_root = true;
      row.E_diophantine = *root;
      double best = 1e300, mid = 0.0;
      for (auto& b : d.bands) {
        double m = 0.5 * (b.emin + b.emax);
        if (std::abs(m - *root) < best) {
          best = std::abs(m - *root);
          mid = m;
        }
      }
      row.band_mid = mid;
      row.distance = best;
      rows.push_back(row);
    }
    ++n_idx;
  }
  return rows;
}

}  // namespace maryland
