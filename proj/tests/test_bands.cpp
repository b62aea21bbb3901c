#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "maryland/bands.hpp"
#include "maryland/oracle.hpp"

using namespace maryland;

namespace {

ModelParams rational_params(long p, long q, double g = 1.0, double omega = 0.2) {
  ModelParams mp;
  mp.d1 = mp.d2 = 1;
  mp.g = g;
  mp.omega = omega;
  mp.alpha = Alpha::make_rational(p, q);
  return mp;
}

}  // namespace

TEST_CASE("single-channel phase") {
  // threshold and the sqrt(2) point
  CHECK(phase_phi(0.2, 1.0 - std::cos(2.0 * pi * 0.2), 1.0) == doctest::Approx(0.0));
  double k2 = 0.37;
  double E = std::sqrt(2.0) - std::cos(2.0 * pi * k2);
  CHECK(phase_phi(k2, E, 1.0) == doctest::Approx(0.25).epsilon(1e-13));
  CHECK(phase_phi(0.1, 1e9, 1.0) < 0.5);
  CHECK(phase_phi(0.1, 1e9, 1.0) > 0.4999);
  CHECK_THROWS_AS(phase_phi(0.2, 0.0, 1.0), OutsideDomain);

  // increasing in E
  double prev = 0.0;
  for (double e = 1.0 - std::cos(2.0 * pi * 0.2) + 0.01; e < 8.0; e += 0.25) {
    double v = phase_phi(0.2, e, 1.0);
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("total phase: q = 1 reduction, derivative, summation order") {
  ModelParams p1 = rational_params(0, 1, 1.0, 0.25);
  CHECK(phase_Phi_q(0.3, 2.5, p1) == doctest::Approx(phase_phi(0.3, 2.5, 1.0)));

  ModelParams p3 = rational_params(1, 3);
  double k2 = 0.5, E = 5.0;
  double analytic = phase_Phi_q_dE(k2, E, p3);
  double h = 1e-5;
  double fd = (phase_Phi_q(k2, E + h, p3) - phase_Phi_q(k2, E - h, p3)) / (2.0 * h);
  CHECK(std::abs(analytic - fd) < 1e-6);

  // permutation invariance: sum the three shifted channels in reverse
  double fwd = phase_Phi_q(k2, E, p3);
  double rev = 0.0;
  for (long l = 3; l >= 1; --l)
    rev += phase_phi(mod1(k2 + l / 3.0), E, p3.g);
  CHECK(fwd == doctest::Approx(rev).epsilon(1e-14));

  // 1/q periodicity in k2
  CHECK(phase_Phi_q(0.21, 4.0, p3) == doctest::Approx(phase_Phi_q(0.21 + 1.0 / 3.0, 4.0, p3)));
}

TEST_CASE("q = 1 band is sqrt(2) - cos(2 pi k2)") {
  ModelParams p = rational_params(0, 1, 1.0, 0.25);
  for (double k2 : {0.05, 0.3, 0.5, 0.62, 0.9}) {
    auto e = solve_band(1, k2, p);
    REQUIRE(e.has_value());
    CHECK(std::abs(*e - (std::sqrt(2.0) - std::cos(2.0 * pi * k2))) < 1e-10);
  }
}

TEST_CASE("band equation residual and monotone index ordering") {
  ModelParams p = rational_params(1, 3);
  BandFunction bf = band_curve(1, p, 128);
  REQUIRE(!bf.empty());
  for (auto& s : bf.samples) {
    Complex pq = partial_product(3, KVec{s.first}, ComplexEnergy::upper(s.second), p);
    CHECK(std::abs(pq - 1.0) < 1e-8);
  }
  // 1/q periodicity of the solved branch
  for (auto& s : bf.samples) {
    auto e = solve_band(1, mod1(s.first + 1.0 / 3.0), p);
    REQUIRE(e.has_value());
    CHECK(std::abs(*e - s.second) < 1e-9);
  }

  ModelParams p8 = rational_params(3, 8, 1.0, 0.34);
  for (double k2 : {0.47, 0.5}) {
    auto e1 = solve_band(1, k2, p8);
    auto e2 = solve_band(2, k2, p8);
    if (e1 && e2) CHECK(*e2 > *e1);
  }
}

TEST_CASE("negative bands through the staggered symmetry") {
  ModelParams p = rational_params(1, 2);
  BandFunction neg = band_curve(-1, p, 64);
  REQUIRE(!neg.empty());
  CHECK(neg.emax() < 0.0);
  for (auto& s : neg.samples) {
    // a negative-band sample solves the band equation of the original model
    Complex pq = partial_product(2, KVec{s.first}, ComplexEnergy::upper(s.second), p);
    CHECK(std::abs(pq - 1.0) < 1e-7);
  }
}

TEST_CASE("band samples match the Bloch-strip oracle (q = 5)") {
  ModelParams p = rational_params(3, 5);
  BandFunction bf = band_curve(1, p, 32);
  REQUIRE(!bf.empty());
  int tested = 0;
  for (size_t i = bf.samples.size() / 4; i < bf.samples.size() && tested < 2;
       i += bf.samples.size() / 3, ++tested) {
    auto [k2, Ej] = bf.samples[i];
    StripSpec strip{5, k2, 120};
    auto evs = strip_eigenvalues(p, strip);
    double best = 1e300;
    for (auto& se : evs)
      if (se.surface_candidate) best = std::min(best, std::abs(se.value - Ej));
    CHECK(best < 1e-3);
  }
}

TEST_CASE("spectrum assembly") {
  ModelParams p = rational_params(0, 1, 1.0, 0.25);
  Spectrum sp = assemble_spectrum(p);
  // [-2,2] merges with the band [sqrt(2)-1, sqrt(2)+1] into one interval
  REQUIRE(!sp.intervals.empty());
  bool found = false;
  for (auto& iv : sp.intervals)
    if (std::abs(iv.lo + 2.0) < 1e-9 && std::abs(iv.hi - (std::sqrt(2.0) + 1.0)) < 1e-8)
      found = true;
  CHECK(found);
  CHECK(sp.contains(0.0));
  CHECK(sp.contains(2.3));
  CHECK(!sp.contains(3.0));

  // [-2,2] always present; N'_q <= q/2
  for (long q = 2; q <= 8; ++q) {
    ModelParams pq = rational_params(1, q);
    Spectrum s = assemble_spectrum(pq);
    CHECK(s.contains(0.0));
    CHECK(s.contains(1.99));
    BandDiagnostics d = band_diagnostics(pq, 96);
    long positive = 0;
    for (auto& b : d.bands)
      if (b.j > 0) ++positive;
    CHECK(positive <= q / 2);
  }
}

TEST_CASE("band separation is positive") {
  ModelParams p = rational_params(3, 8, 1.0, 0.34);
  BandDiagnostics d = band_diagnostics(p, 128);
  REQUIRE(d.bands.size() >= 2);
  CHECK(d.min_separation > 0.0);
}

TEST_CASE("critical energies") {
  ModelParams p = rational_params(0, 1, 1.0, 0.25);
  auto ce = critical_energies(p, 512);
  auto has = [&](double E, double tol) {
    for (double c : ce)
      if (std::abs(c - E) < tol) return true;
    return false;
  };
  CHECK(has(-2.0, 1e-12));
  CHECK(has(2.0, 1e-12));
  CHECK(has(std::sqrt(2.0) - 1.0, 1e-6));
  CHECK(has(std::sqrt(2.0) + 1.0, 1e-6));

  // refinement stability of the detected set
  auto ce2 = critical_energies(p, 1024);
  REQUIRE(ce.size() == ce2.size());
  for (size_t i = 0; i < ce.size(); ++i) CHECK(std::abs(ce[i] - ce2[i]) < 1e-6);
}

TEST_CASE("band width asymptotics diagnostics") {
  ModelParams p = rational_params(2, 3, 1.0, 0.34);
  BandDiagnostics d = band_diagnostics(p, 128);
  CHECK(d.delta_phi > 0.0);
  REQUIRE(d.phi_fourier.size() >= 3);
  CHECK(d.phi_fourier[1] < d.phi_fourier[0]);
  CHECK(d.phi_fourier[2] < d.phi_fourier[1]);
}

TEST_CASE("diophantine limit function") {
  // monotone increasing, bounded by 1/2
  double prev = 0.0;
  for (double E = 2.01; E < 40.0; E *= 1.4) {
    double f = diophantine_f(E, 1.0);
    CHECK(f > prev);
    CHECK(f < 0.5);
    prev = f;
  }
  CHECK_THROWS_AS(diophantine_f(1.5, 1.0), OutsideDomain);

  // f equals the q -> infinity average of Phi_q / q
  ModelParams p34 = rational_params(21, 34, 1.0, 0.2);
  double f = diophantine_f(2.7, 1.0);
  double avg = phase_Phi_q(0.5, 2.7, p34) / 34.0;
  CHECK(std::abs(f - avg) < 1e-3);

  auto root = diophantine_root(0.35, 1.0);
  REQUIRE(root.has_value());
  CHECK(diophantine_f(*root, 1.0) == doctest::Approx(0.35).epsilon(1e-8));
  CHECK_FALSE(diophantine_root(0.2, 1.0).has_value());  // below f(2+)
  CHECK_FALSE(diophantine_root(0.6, 1.0).has_value());
}

TEST_CASE("limit comparison rows") {
  ModelParams p;
  p.d1 = p.d2 = 1;
  p.g = 8.0;
  p.omega = 0.46;
  p.alpha = Alpha::golden();
  std::vector<std::pair<long, long>> conv{{3, 5}, {5, 8}};
  auto rows = limit_comparison(0.61803398874989484820, conv, {1, -1}, p);
  REQUIRE(rows.size() == 4);
  for (auto& r : rows) {
    CHECK(r.has_root);
    CHECK(r.distance < 1.0);
  }
  // distance shrinks from q = 5 to q = 8 for both tracked sites
  CHECK(rows[2].distance < rows[0].distance);
  CHECK(rows[3].distance < rows[1].distance);
}
