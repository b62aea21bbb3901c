#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "maryland/bands.hpp"
#include "maryland/oracle.hpp"
#include "maryland/resolvent.hpp"

using namespace maryland;

namespace {

ModelParams golden_params() {
  ModelParams p;
  p.d1 = p.d2 = 1;
  p.g = 1.0;
  p.alpha = Alpha::golden();
  p.omega = 0.2;
  return p;
}

}  // namespace

TEST_CASE("vanishing coupling reduces the series to the free Green function") {
  ModelParams p = golden_params();
  p.g = 1e-8;
  SeriesControl ctrl;
  ctrl.tol = 5e-7;  // term sizes scale with g; the coherent tail covers the rest
  ComplexEnergy z = ComplexEnergy::off({0.3, 0.6});
  for (auto [x, y] : std::vector<std::pair<XVec, XVec>>{
           {XVec{0, 0}, XVec{0, 0}}, {XVec{2, -1}, XVec{0, 1}}}) {
    GreenValue full = green_full_qp(x, y, z, p, ctrl);
    GreenValue free = green_nd(2, x - y, z, 1e-10);
    CHECK(std::abs(full.value - free.value) < 1e-6);
  }
}

TEST_CASE("series resolvent matches the finite-box oracle") {
  ModelParams p = golden_params();
  SeriesControl ctrl;
  ctrl.tol = 1e-6;
  ComplexEnergy z = ComplexEnergy::off({0.3, 0.2});
  BoxSpec box{40, 40};
  for (auto [x, y] : std::vector<std::pair<XVec, XVec>>{
           {XVec{0, 0}, XVec{0, 0}}, {XVec{1, 2}, XVec{0, 0}}, {XVec{-2, 3}, XVec{1, -1}}}) {
    GreenValue series = green_full_qp(x, y, z, p, ctrl);
    Complex oracle = box_resolvent(x, y, z, p, box);
    CHECK(std::abs(series.value - oracle) < 3e-2);
  }
}

TEST_CASE("symmetry, conjugation and the Herglotz quadratic form") {
  ModelParams p = golden_params();
  SeriesControl ctrl;
  ctrl.tol = 1e-8;
  ComplexEnergy z = ComplexEnergy::off({0.4, 0.5});

  GreenValue gxy = green_full_qp(XVec{1, 2}, XVec{0, -1}, z, p, ctrl);
  GreenValue gyx = green_full_qp(XVec{0, -1}, XVec{1, 2}, z, p, ctrl);
  CHECK(std::abs(gxy.value - gyx.value) < 1e-7);

  GreenValue gc = green_full_qp(XVec{1, 2}, XVec{0, -1}, z.conjugated(), p, ctrl);
  CHECK(std::abs(std::conj(gxy.value) - gc.value) < 1e-12);

  // Im <f, G f> >= 0 for random finitely supported f.
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<XVec> sites{XVec{0, 0}, XVec{1, 1}, XVec{-1, 2}};
  std::vector<std::vector<Complex>> gmat(sites.size(), std::vector<Complex>(sites.size()));
  for (size_t i = 0; i < sites.size(); ++i)
    for (size_t j = 0; j < sites.size(); ++j)
      gmat[i][j] = green_full_qp(sites[i], sites[j], z, p, ctrl).value;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Complex> f(sites.size());
    for (auto& c : f) c = Complex(u(rng), u(rng));
    Complex quad{0.0, 0.0};
    for (size_t i = 0; i < sites.size(); ++i)
      for (size_t j = 0; j < sites.size(); ++j) quad += std::conj(f[i]) * gmat[i][j] * f[j];
    CHECK(quad.imag() > -1e-6);
  }
}

TEST_CASE("omega average reproduces the dissipative constant potential") {
  // Averaging the phase over 64 equispaced omega collapses every m >= 1 term;
  // the result is the constant-potential kernel with v = -ig.
  ModelParams p = golden_params();
  SeriesControl ctrl;
  ctrl.tol = 1e-10;
  ComplexEnergy z = ComplexEnergy::off({0.0, 1.0});
  XVec x{1, 1}, y{0, 0};
  Complex avg{0.0, 0.0};
  const int n_omega = 64;
  for (int i = 0; i < n_omega; ++i) {
    ModelParams pw = p;
    pw.omega = double(i) / n_omega;
    avg += green_full_qp(x, y, z, pw, ctrl).value / double(n_omega);
  }
  Complex ref = green_constant_potential(x, y, z, p, Complex(0.0, -p.g)).value;
  CHECK(std::abs(avg - ref) < 1e-8);
}

TEST_CASE("q = 1 periodic sum equals the constant potential closed form") {
  ModelParams p = golden_params();
  p.alpha = Alpha::make_rational(0, 1);
  p.omega = 0.25;  // v0 = tan(pi/4) = 1
  for (Complex zc : {Complex{0.0, 3.0}, Complex{1.5, 1.0}, Complex{-0.5, 0.4}}) {
    ComplexEnergy z = ComplexEnergy::off(zc);
    for (auto [x, y] : std::vector<std::pair<XVec, XVec>>{
             {XVec{0, 0}, XVec{0, 0}}, {XVec{2, 1}, XVec{-1, 0}}}) {
      GreenValue a = green_full_periodic(x, y, z, p);
      GreenValue b = green_constant_potential(x, y, z, p, Complex(1.0, 0.0));
      CHECK(std::abs(a.value - b.value) < 1e-10);
    }
  }
}

TEST_CASE("periodic and quasiperiodic summation orders agree at rational alpha") {
  ModelParams p = golden_params();
  p.alpha = Alpha::make_rational(1, 3);
  SeriesControl ctrl;
  ctrl.tol = 1e-9;
  ComplexEnergy z = ComplexEnergy::off({0.3, 1.0});
  for (auto [x, y] : std::vector<std::pair<XVec, XVec>>{
           {XVec{0, 0}, XVec{0, 0}}, {XVec{1, -2}, XVec{0, 1}}}) {
    GreenValue a = green_full_periodic(x, y, z, p);
    GreenValue b = green_full_qp(x, y, z, p, ctrl);
    CHECK(std::abs(a.value - b.value) < 1e-8);
  }
}

TEST_CASE("on-axis periodic evaluation matches the epsilon extrapolation") {
  // Independent route: plain off-axis quadrature at a geometric epsilon
  // sequence, Neville-extrapolated to the axis.  Exercises both an off-band
  // energy and one inside a surface band (pole subtraction path).
  ModelParams p = golden_params();
  p.alpha = Alpha::make_rational(1, 2);
  XVec x{1, 0}, y{0, 1};
  for (double E : {2.5, 1.6183}) {
    std::vector<double> eps{0.2, 0.1, 0.05, 0.025, 0.0125, 0.00625};
    std::vector<Complex> vals;
    for (double e : eps)
      vals.push_back(green_full_periodic(x, y, ComplexEnergy::off({E, e}), p, 1 << 16).value);
    for (size_t m = 1; m < vals.size(); ++m)
      for (size_t i = 0; i + m < vals.size(); ++i)
        vals[i] = (eps[i] * vals[i + 1] - eps[i + m] * vals[i]) / (eps[i] - eps[i + m]);
    GreenValue on = green_full_periodic(x, y, ComplexEnergy::upper(E), p, 8192);
    CHECK(std::abs(on.value - vals[0]) < 3e-6);
  }
}

TEST_CASE("on-axis quasiperiodic series within the admissible window") {
  ModelParams p = golden_params();
  SeriesControl ctrl;
  ctrl.tol = 1e-8;
  // |E| <= d - gamma holds; the series contracts through the open channels.
  GreenValue g = green_full_qp(XVec{0, 0}, XVec{0, 0}, ComplexEnergy::upper(0.3), p, ctrl);
  CHECK(std::isfinite(g.value.real()));
  CHECK(g.value.imag() > 0.0);  // boundary value of a Herglotz function
  CHECK_THROWS_AS(
      green_full_qp(XVec{0, 0}, XVec{0, 0}, ComplexEnergy::upper(1.999), p, ctrl),
      ConvergenceFailure);
}

TEST_CASE("oracle gap shrinks with the box size") {
  ModelParams p = golden_params();
  SeriesControl ctrl;
  ctrl.tol = 1e-7;
  ComplexEnergy z = ComplexEnergy::off({0.3, 0.2});
  GreenValue series = green_full_qp(XVec{0, 0}, XVec{0, 0}, z, p, ctrl);
  double prev = 1e300;
  for (int L : {20, 40, 60}) {
    BoxSpec box{L, L};
    double gap = std::abs(series.value - box_resolvent(XVec{0, 0}, XVec{0, 0}, z, p, box));
    CHECK(gap < 1.2 * prev);
    prev = gap;
  }
  CHECK(prev < 2e-2);
}

TEST_CASE("lyapunov: Birkhoff average vs torus integral") {
  ModelParams p = golden_params();
  LyapunovResult r = lyapunov_exponent(0.0, p, 10000);
  CHECK(r.gap < 1e-2);
  CHECK(r.integral < 0.0);
  CHECK(r.birkhoff < 0.0);

  // all channels closed: |b_hat| = 1 and the integrand vanishes
  LyapunovResult r2 = lyapunov_exponent(3.0, p, 1000);
  CHECK(std::abs(r2.integral) < 1e-12);

  // integral strictly negative inside the spectrum of the Laplacian
  for (double E : {-1.9, -1.0, 1.0, 1.9})
    CHECK(lyapunov_exponent(E, p, 100).integral < 0.0);
}

TEST_CASE("higher-dimensional splits reduce to the free Green function at g -> 0") {
  SeriesControl ctrl;
  ctrl.tol = 5e-7;
  ComplexEnergy z = ComplexEnergy::off({0.4, 1.0});

  // d1 = 2, d2 = 1 (Bessel route behind the Chebyshev cache)
  ModelParams p21;
  p21.d1 = 2;
  p21.d2 = 1;
  p21.g = 1e-8;
  p21.alpha = Alpha::golden();
  p21.omega = 0.2;
  XVec x{1, 0, 2}, y{0, 0, 0};
  GreenValue full = green_full_qp(x, y, z, p21, ctrl);
  GreenValue free = green_nd(3, x - y, z, 1e-9);
  CHECK(std::abs(full.value - free.value) < 1e-6);

  // d1 = 1, d2 = 2 (two-torus quadrature)
  ModelParams p12;
  p12.d1 = 1;
  p12.d2 = 2;
  p12.g = 1e-8;
  p12.alpha = Alpha::make_irrational(KVec{0.61803398874989485, 0.41421356237309503});
  p12.omega = 0.2;
  GreenValue full2 = green_full_qp(x, y, z, p12, ctrl);
  CHECK(std::abs(full2.value - free.value) < 1e-6);
}

TEST_CASE("moderate coupling sanity for d = 3 splits") {
  SeriesControl ctrl;
  ctrl.tol = 1e-6;
  ComplexEnergy z = ComplexEnergy::off({0.0, 1.5});
  ModelParams p12;
  p12.d1 = 1;
  p12.d2 = 2;
  p12.g = 1.0;
  p12.alpha = Alpha::make_irrational(KVec{0.61803398874989485, 0.41421356237309503});
  p12.omega = 0.2;
  GreenValue gxy = green_full_qp(XVec{0, 0, 0}, XVec{0, 0, 0}, z, p12, ctrl);
  CHECK(gxy.value.imag() > 0.0);  // Herglotz diagonal
  GreenValue gc = green_full_qp(XVec{0, 0, 0}, XVec{0, 0, 0}, z.conjugated(), p12, ctrl);
  CHECK(std::abs(std::conj(gxy.value) - gc.value) < 1e-12);
}
