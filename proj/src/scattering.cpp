#include "maryland/scattering.hpp"

#include <algorithm>
#include <cmath>

#include "maryland/bands.hpp"

namespace maryland {

namespace {

constexpr double kThresholdTol = 1e-9;

constexpr int kGLn = 16;
constexpr double kGx[kGLn] = {
    -0.9894009349916499, -0.9445750230732326, -0.8656312023878318,
    -0.7554044083550030, -0.6178762444026438, -0.4580167776572274,
    -0.2816035507792589, -0.0950125098376374, 0.0950125098376374,
    0.2816035507792589,  0.4580167776572274,  0.6178762444026438,
    0.7554044083550030,  0.8656312023878318,  0.9445750230732326,
    0.9894009349916499};
constexpr double kGw[kGLn] = {
    0.0271524594117541, 0.0622535239386479, 0.0951585116824928,
    0.1246289712555339, 0.1495959888165767, 0.1691565193950025,
    0.1826034150449236, 0.1894506104550685, 0.1894506104550685,
    0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479,
    0.0271524594117541};

Side side_of(StateSign s) { return s == StateSign::minus ? Side::upper : Side::lower; }

ChannelClass classify(double lambda) {
  if (std::abs(std::abs(lambda) - 1.0) < kThresholdTol)
    throw ChannelAtThreshold("channel energy within 1e-9 of a band edge");
  return std::abs(lambda) < 1.0 ? ChannelClass::volume : ChannelClass::surface;
}

KVec negate_mod1(const KVec& k) {
  KVec r = k;
  for (int i = 0; i < k.n; ++i) r.c[i] = mod1(-k.c[i]);
  return r;
}

ScatteringState build_qp_minus(const KVec& k, const ModelParams& p,
                               const SeriesControl& ctrl) {
  ScatteringState st;
  st.params = p;
  st.k = k;
  st.sign = StateSign::minus;
  st.side = Side::upper;
  st.energy = energy_symbol(k, p.d());
  const double E = st.energy;
  if (std::abs(E) >= p.d()) throw ConvergenceFailure("incident energy outside (-d, d)");

  ComplexEnergy z = ComplexEnergy::upper(E);
  ContractionEstimate ce = contraction_rate(z, p, ctrl.gamma);
  if (ce.rho >= 1.0 - 1e-12)
    throw ConvergenceFailure("series not contracting near the torus corners");

  const KVec k2 = k.tail(p.d2);
  const Complex sig = p.sigma();
  Complex a_base = inv_gamma_denom(k2, z, p);
  Complex running{1.0, 0.0};  // prod_{j=1..m-1} b_hat(k2 - j alpha)
  Complex sig_m{1.0, 0.0};

  double tail = 1e300;
  bool converged = false;
  for (long m = 0; m <= ctrl.max_terms; ++m) {
    KVec kap = p.shift_k2(k2, -m);
    Complex c;
    if (m == 0) {
      c = -p.g * a_base;
    } else {
      sig_m *= sig;
      Complex a_kap = inv_gamma_denom(kap, z, p);
      c = Complex(0.0, 2.0 * p.g) * sig_m * a_base * a_kap * running;
      running *= b_hat(kap, z, p);
    }
    double lam = E - energy_symbol(kap, p.d2);
    ComplexEnergy lamz = ComplexEnergy::upper(lam);
    ChannelTerm t;
    t.m = m;
    t.coefficient = c;
    t.kappa = kap;
    t.lambda = lam;
    t.eta_m = eta(lamz);
    t.amplitude = -c / sqrt_z2m1_at(lamz);
    t.cls = classify(lam);
    st.terms.push_back(t);

    // Sup norm of the next term: the bounded-ratio estimate 2|a_base||prod|
    // (free of the near-band-edge blowup) or the decaying amplitude route,
    // whichever is smaller.  Tail: incoherent geometric with the measured
    // contraction rate, sharpened by a coherent bound when the rotating
    // phase sigma^m dominates the decay (weak coupling, |b_hat| -> 1).  The
    // coherent denominator is minimized over the phases realized on the
    // contract window |x2| <= 21: near the tan poles of the potential the
    // phases align and the series converges slowly there.
    Complex r = sig * b_hat(kap, z, p);
    double bound = 2.0 * std::abs(a_base) * std::abs(running);
    if (m >= 1) bound = std::min(bound, std::abs(t.amplitude) * std::abs(r));
    tail = bound * ce.rho / (1.0 - ce.rho);
    if (std::abs(r) < 1.0) {
      double denom = 1e300;
      const long win = p.d2 == 1 ? 21 : 10;
      for (long w = -win; w <= win; ++w) {
        double ph = -2.0 * pi * p.alpha.value.c[0] * double(w);
        denom = std::min(denom, std::abs(1.0 - r * std::exp(Complex(0.0, ph))));
      }
      if (denom > 1e-12)
        tail = std::min(tail, 3.0 * bound * std::abs(r) / denom);
    }
    if (m >= 1 && bound < ctrl.tol / 10.0 && tail < ctrl.tol / 2.0) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw ConvergenceFailure("state series did not reach the requested tolerance");
  return st;
}

}  // namespace

Complex ScatteringState::eval(const XVec& x) const {
  Complex v{0.0, 0.0};
  if (has_plane_wave) v = std::exp(Complex(0.0, 2.0 * pi * dot(k, x)));
  const XVec x2 = x.tail(params.d2);
  for (const auto& t : terms) {
    Complex g = green_1d(x.c[0], ComplexEnergy::boundary(t.lambda, side)).value;
    v += t.coefficient * g * std::exp(Complex(0.0, 2.0 * pi * dot(t.kappa, x2)));
  }
  return v;
}

ScatteringState psi_qp(const KVec& k, StateSign sign, const ModelParams& p,
                       const SeriesControl& ctrl) {
  p.validate();
  if (p.d1 != 1) throw BadConfig("states implemented for d1 = 1");
  if (k.n != p.d()) throw BadConfig("psi_qp: momentum dimension mismatch");

  if (sign == StateSign::minus) return build_qp_minus(k, p, ctrl);

  // Plus states are the complex conjugates of minus states at -k.
  ScatteringState st = build_qp_minus(negate_mod1(k), p, ctrl);
  st.sign = StateSign::plus;
  st.side = Side::lower;
  st.k = k;
  for (auto& t : st.terms) {
    t.coefficient = std::conj(t.coefficient);
    t.kappa = negate_mod1(t.kappa);
    t.eta_m = -std::conj(t.eta_m);
    t.amplitude = std::conj(t.amplitude);
  }
  return st;
}

ScatteringState psi_periodic_volume(const KVec& k, StateSign sign, const ModelParams& p) {
  p.validate();
  if (!p.alpha.rational || p.d1 != 1 || p.d2 != 1)
    throw BadConfig("periodic states need rational alpha and d1 = d2 = 1");
  if (k.n != 2) throw BadConfig("psi_periodic_volume: need a 2-d momentum");

  ScatteringState st;
  st.params = p;
  st.k = k;
  st.sign = sign;
  st.side = side_of(sign);
  st.energy = energy_symbol(k, 2);
  ComplexEnergy z = ComplexEnergy::boundary(st.energy, st.side);

  const KVec k2 = k.tail(1);
  const long q = p.alpha.q;
  for (long m = 0; m <= q; ++m) {
    KVec kap = p.shift_k2(k2, -m);
    Complex c;
    try {
      c = t_coefficient_resummed(m, kap, z, p);
    } catch (const NearPole&) {
      throw DegenerateEnergy("E_2(k) collides with a surface band at this k2");
    }
    double lam = st.energy - energy_symbol(kap, 1);
    ComplexEnergy lamz = ComplexEnergy::boundary(lam, st.side);
    ChannelTerm t;
    t.m = m;
    t.coefficient = c;
    t.kappa = kap;
    t.lambda = lam;
    t.eta_m = eta(lamz);
    t.amplitude = -c / sqrt_z2m1_at(lamz);
    t.cls = classify(lam);
    st.terms.push_back(t);
  }
  return st;
}

ScatteringState psi_periodic_surface(double k2, int j, StateSign sign, const ModelParams& p) {
  p.validate();
  if (!p.alpha.rational || p.d1 != 1 || p.d2 != 1)
    throw BadConfig("surface states need rational alpha and d1 = d2 = 1");

  auto ej = solve_band(j, k2, p);
  if (!ej) throw OutsideDomain("k2 outside the band domain D_j");
  const double E = *ej;
  const long q = p.alpha.q;

  ScatteringState st;
  st.params = p;
  st.k = KVec{0.0, k2};
  st.band_index = j;
  st.sign = sign;
  st.side = side_of(sign);
  st.energy = E;
  st.has_plane_wave = false;

  ComplexEnergy z = ComplexEnergy::boundary(E, st.side);
  const KVec k2v{k2};
  for (long l = 1; l <= q; ++l) {
    double lam = E - energy_symbol(p.shift_k2(k2v, l), 1);
    if (std::abs(lam) < 1.0 + kThresholdTol)
      throw NearBandEdge("open or threshold channel in a surface state");
  }

  Complex dpq = dPq_dE(k2v, z, p);
  if (std::abs(dpq) < 1e-12) throw DegenerateEnergy("dP_q/dE vanishes on the band");

  const double lam0 = E + std::cos(2.0 * pi * k2);
  const double ij = std::sqrt(std::abs(lam0) / std::pow(lam0 * lam0 - 1.0, 1.5));

  const Complex sig = p.sigma();
  Complex a_base = inv_gamma_denom(k2v, z, p);
  Complex running{1.0, 0.0};
  Complex sig_m{1.0, 0.0};
  for (long m = 1; m <= q; ++m) {
    sig_m *= sig;
    KVec kap = p.shift_k2(k2v, -m);
    Complex a_kap = inv_gamma_denom(kap, z, p);
    Complex c = Complex(0.0, 2.0 * p.g) * sig_m * a_base * a_kap * running / dpq;
    running *= b_hat(kap, z, p);

    double lam = E - energy_symbol(kap, 1);
    ComplexEnergy lamz = ComplexEnergy::boundary(lam, st.side);
    ChannelTerm t;
    t.m = m;
    t.coefficient = ij * c;
    t.kappa = kap;
    t.lambda = lam;
    t.eta_m = eta(lamz);
    t.amplitude = -ij * c / sqrt_z2m1_at(lamz);
    t.cls = ChannelClass::surface;
    st.terms.push_back(t);
  }
  return st;
}

double schrodinger_residual(const std::function<Complex(const XVec&)>& psi, double E,
                            const ModelParams& p, int window) {
  const int d = p.d();
  const int W = window + 1;
  const int L = 2 * W + 1;
  long total = 1;
  for (int i = 0; i < d; ++i) total *= L;

  std::vector<Complex> tab(total);
  auto index_to_x = [&](long idx) {
    XVec x;
    x.n = d;
    for (int i = 0; i < d; ++i) {
      x.c[i] = int(idx % L) - W;
      idx /= L;
    }
    return x;
  };
  for (long idx = 0; idx < total; ++idx) tab[idx] = psi(index_to_x(idx));

  auto at = [&](const XVec& x) {
    long idx = 0, stride = 1;
    for (int i = 0; i < d; ++i) {
      idx += (x.c[i] + W) * stride;
      stride *= L;
    }
    return tab[idx];
  };

  double worst = 0.0;
  for (long idx = 0; idx < total; ++idx) {
    XVec x = index_to_x(idx);
    bool interior = true;
    for (int i = 0; i < d; ++i)
      if (std::abs(x.c[i]) > window) interior = false;
    if (!interior) continue;

    Complex h0{0.0, 0.0};
    for (int i = 0; i < d; ++i) {
      XVec xp = x, xm = x;
      xp.c[i] += 1;
      xm.c[i] -= 1;
      h0 += -0.5 * (at(xp) + at(xm));
    }
    Complex r = h0 - E * at(x);
    bool on_surface = true;
    for (int i = 0; i < p.d1; ++i)
      if (x.c[i] != 0) on_surface = false;
    if (on_surface) r += potential_v(x.tail(p.d2), p) * at(x);
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

namespace {

}  // namespace

// gamma0(l; E +- i0) = int_0^1 e^{2 pi i k l} G0^(1)(0; E + cos 2 pi k) dk for
// all |l| <= lmax at once.  Panels split at the channel edges; the endpoint
// substitution k = a + (b-a) sin^2(pi u / 2) absorbs the 1/sqrt singularities.
std::vector<Complex> gamma0_kernel_1d(double E, Side side, int lmax) {
  // At E = 0 a channel grazes the band edge tangentially and the kernel
  // acquires the 2-d band-center logarithm; the boundary limit diverges.
  if (std::abs(E) < 1e-9 || std::abs(std::abs(E) - 2.0) < 1e-9)
    throw NearSingularEnergy("surface kernel log-diverges at E in {0, +-2}");
  std::vector<double> edges{0.0, 1.0};
  for (double ke : channel_edges_1d(E)) edges.push_back(ke);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end(),
                          [](double a, double b) { return std::abs(a - b) < 1e-14; }),
              edges.end());

  auto sym = [&](double k) {
    return green_1d(0, ComplexEnergy::boundary(E + std::cos(2.0 * pi * k), side)).value;
  };

  std::vector<Complex> out(2 * lmax + 1, Complex{0.0, 0.0});
  for (size_t e = 0; e + 1 < edges.size(); ++e) {
    const double a = edges[e], b = edges[e + 1];
    const int nsub = std::max(8, int(std::ceil(3.0 * lmax * (b - a))) + 8);
    for (int s = 0; s < nsub; ++s) {
      for (int i = 0; i < kGLn; ++i) {
        double u = (s + 0.5 * (kGx[i] + 1.0)) / nsub;
        double sn = std::sin(0.5 * pi * u);
        double k = a + (b - a) * sn * sn;
        double jac = (b - a) * 0.25 * pi * std::sin(pi * u) / nsub;
        Complex f = sym(k) * (kGw[i] * jac);
        // accumulate e^{2 pi i k l} for all lags
        Complex step = std::exp(Complex(0.0, 2.0 * pi * k));
        Complex ph = std::exp(Complex(0.0, -2.0 * pi * k * lmax));
        for (int l = -lmax; l <= lmax; ++l) {
          out[l + lmax] += f * ph;
          ph *= step;
        }
      }
    }
  }
  return out;
}

namespace {

double taper_weight(double a, double inner, double outer) {
  double u = (a - inner) / (outer - inner);
  if (u <= 0.0) return 1.0;
  if (u >= 1.0) return 0.0;
  double s = u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
  return 1.0 - s;
}

}  // namespace

LSResidual lippmann_schwinger_residual(const KVec& k, StateSign sign, const ModelParams& p,
                                       int window_x2, const SeriesControl& ctrl,
                                       bool mismatch_kernel_side) {
  p.validate();
  if (p.d2 != 1) throw BadConfig("LS residual implemented for d2 = 1");
  ScatteringState st = psi_qp(k, sign, p, ctrl);
  const double E = st.energy;

  Side kside = st.side;
  if (mismatch_kernel_side) kside = (kside == Side::upper) ? Side::lower : Side::upper;

  const int We = 16;  // evaluation window
  const int W = window_x2;
  const int lmax = W + We;
  std::vector<Complex> kern = gamma0_kernel_1d(E, kside, lmax);

  std::vector<Complex> vpsi(2 * W + 1);
  for (int y = -W; y <= W; ++y) {
    XVec site{0, y};
    vpsi[y + W] = potential_v(site.tail(1), p) * st.eval(site) *
                  taper_weight(std::abs(double(y)), 0.6 * W, double(W));
  }

  const double k2 = k.c[k.n - 1];
  double worst = 0.0;
  for (int x = -We; x <= We; ++x) {
    Complex conv{0.0, 0.0};
    for (int y = -W; y <= W; ++y) conv += kern[(x - y) + lmax] * vpsi[y + W];
    Complex r = st.eval(XVec{0, x}) + conv -
                std::exp(Complex(0.0, 2.0 * pi * k2 * x));
    worst = std::max(worst, std::abs(r));
  }

  // Scale of the outermost untapered shell, as a truncation indicator.
  double tail = 0.0;
  for (int y = int(0.95 * W); y <= W; ++y) {
    XVec site{0, y};
    double mag = std::abs(potential_v(site.tail(1), p) * st.eval(site));
    tail = std::max(tail, mag * std::abs(kern[lmax + int(0.9 * W)]));
  }
  return {worst, tail};
}

double homogeneous_ls_residual(const ScatteringState& s, int window_x1, int x2_count) {
  const ModelParams& p = s.params;
  if (!p.alpha.rational || p.d2 != 1)
    throw BadConfig("homogeneous LS residual needs rational alpha, d2 = 1");
  if (std::abs(s.energy) <= 2.0)
    throw BadConfig("homogeneous LS residual needs E outside [-2,2]");
  const long q = p.alpha.q;
  const double k2 = s.k.c[1];

  // Bloch-collapsed kernel: sum_n G0^(2)((x1, w - n q); z) e^{2 pi i k2 q n}
  //   = (1/q) sum_l e^{2 pi i (k2 + l/q) w} G0^(1)(x1; z + cos 2 pi (k2 + l/q)).
  auto kernel = [&](long x1, long w) {
    Complex acc{0.0, 0.0};
    for (long l = 0; l < q; ++l) {
      double kl = mod1(k2 + double(l) / q);
      Complex g = green_1d(x1, ComplexEnergy::boundary(
                                   s.energy + std::cos(2.0 * pi * kl), s.side))
                      .value;
      acc += std::exp(Complex(0.0, 2.0 * pi * kl * w)) * g;
    }
    return acc / double(q);
  };

  double worst = 0.0;
  for (long x1 = -window_x1; x1 <= window_x1; ++x1)
    for (long x2 = 0; x2 < x2_count; ++x2) {
      Complex conv{0.0, 0.0};
      for (long r = 0; r < q; ++r) {
        XVec site{0, int(r)};
        conv += potential_v(site.tail(1), p) * s.eval(site) * kernel(x1, x2 - r);
      }
      Complex res = s.eval(XVec{int(x1), int(x2)}) + conv;
      worst = std::max(worst, std::abs(res));
    }
  return worst;
}

std::pair<std::vector<ChannelTerm>, std::vector<ChannelTerm>> split_volume_surface(
    const ScatteringState& s) {
  if (s.params.d1 != 1) throw BadConfig("volume/surface split needs d1 = 1");
  std::pair<std::vector<ChannelTerm>, std::vector<ChannelTerm>> out;
  for (const auto& t : s.terms) {
    ChannelClass c = classify(t.lambda);
    (c == ChannelClass::volume ? out.first : out.second).push_back(t);
  }
  return out;
}

Amplitudes amplitudes(const KVec& k, const ModelParams& p, const SeriesControl& ctrl) {
  ScatteringState st = psi_qp(k, StateSign::minus, p, ctrl);
  Amplitudes a;
  for (const auto& t : st.terms) {
    if (t.m == 0) {
      a.r0 = t.amplitude;
      a.t0 = 1.0 + t.amplitude;
    }
    if (t.cls == ChannelClass::volume) a.open_channels[t.m] = t.amplitude;
  }
  return a;
}

Complex point_reflection_reference(double k, double v) {
  return -Complex(0.0, v) / (Complex(0.0, v) + std::sin(2.0 * pi * k));
}

Complex point_reflection_tmatrix(double k, double v) {
  double E = -std::cos(2.0 * pi * k);
  ComplexEnergy z = ComplexEnergy::upper(E);
  Complex g0 = green_1d(0, z).value;
  Complex t = v / (1.0 + v * g0);
  return t / sqrt_z2m1_at(z);
}

}  // namespace maryland
