#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "maryland/lattice_green.hpp"
#include "maryland/oracle.hpp"

using namespace maryland;

TEST_CASE("eta branch classification on the upper boundary") {
  CHECK(std::abs(eta(ComplexEnergy::upper(0.0)) - Complex(pi / 2, 0.0)) < 1e-15);
  CHECK(std::abs(eta(ComplexEnergy::upper(1.0)) - Complex(pi, 0.0)) < 1e-15);
  CHECK(std::abs(eta(ComplexEnergy::upper(-1.0))) < 1e-15);

  // inside the band: real, in (0, pi), with -cos(eta) = E
  for (double E : {-0.9, -0.3, 0.4, 0.8}) {
    Complex e = eta(ComplexEnergy::upper(E));
    CHECK(e.imag() == doctest::Approx(0.0));
    CHECK(e.real() > 0.0);
    CHECK(e.real() < pi);
    CHECK(-std::cos(e.real()) == doctest::Approx(E).epsilon(1e-13));
  }
  // above: pi + i t;  below: i t
  Complex ep = eta(ComplexEnergy::upper(2.0));
  CHECK(ep.real() == doctest::Approx(pi));
  CHECK(ep.imag() == doctest::Approx(1.3169578969248166).epsilon(1e-12));  // acosh(2)
  Complex em = eta(ComplexEnergy::upper(-2.0));
  CHECK(em.real() == doctest::Approx(0.0));
  CHECK(em.imag() == doctest::Approx(1.3169578969248166).epsilon(1e-12));
}

TEST_CASE("eta solves -cos(eta) = z off axis with Im eta >= 0") {
  for (double re : {-2.5, -0.7, 0.0, 1.3, 3.0})
    for (double im : {0.1, 1.0, 4.0}) {
      Complex z{re, im};
      Complex e = eta(ComplexEnergy::off(z));
      CHECK(std::abs(-std::cos(e) - z) < 1e-12 * std::abs(z) + 1e-12);
      CHECK(e.imag() >= 0.0);
    }
}

TEST_CASE("green_1d closed-form values") {
  CHECK(std::abs(green_1d(0, ComplexEnergy::upper(0.0)).value - Complex(0, 1)) < 1e-15);
  CHECK(std::abs(green_1d(0, ComplexEnergy::upper(2.0)).value -
                 Complex(-1.0 / std::sqrt(3.0), 0)) < 1e-15);
  CHECK(std::abs(green_1d(1, ComplexEnergy::upper(0.0)).value - Complex(-1, 0)) < 1e-14);
  CHECK(green_1d(0, ComplexEnergy::upper(0.0)).err == 0.0);
  CHECK_THROWS_AS(green_1d(0, ComplexEnergy::upper(1.0)), BranchPointError);
}

TEST_CASE("green_1d agrees with the torus quadrature") {
  for (long x : {0L, 1L, 4L, 10L})
    for (double im : {0.1, 0.7, 3.0}) {
      Complex z{0.4, im};
      Complex a = green_1d(x, ComplexEnergy::off(z)).value;
      Complex b = quadrature_green(1, XVec{int(x)}, z, 4096);
      CHECK(std::abs(a - b) < 1e-11);
    }
}

TEST_CASE("green_nd routes agree for nu = 1") {
  for (long x : {0L, 2L, 7L}) {
    ComplexEnergy z = ComplexEnergy::off({0.0, 3.0});
    GreenValue a = green_1d(x, z);
    GreenValue b = green_nd(1, XVec{int(x)}, z);
    CHECK(std::abs(a.value - b.value) < 1e-12);
  }
}

TEST_CASE("green_nd nu = 2 matches direct quadrature") {
  for (auto [x1, x2] : {std::pair{0, 0}, {3, -1}, {1, 2}}) {
    Complex z{0.5, 1.0};
    GreenValue a = green_nd(2, XVec{x1, x2}, ComplexEnergy::off(z), 1e-9);
    Complex b = quadrature_green(2, XVec{x1, x2}, z, 1024);
    CHECK(std::abs(a.value - b) < std::max(1e-8, a.err));
  }
  // purely imaginary z = 5i at the origin
  GreenValue a = green_nd(2, XVec{0, 0}, ComplexEnergy::off({0.0, 5.0}), 1e-10);
  Complex b = quadrature_green(2, XVec{0, 0}, {0.0, 5.0}, 1024);
  CHECK(std::abs(a.value - b) < 1e-9);
}

TEST_CASE("green_nd reflection and conjugation symmetry") {
  ComplexEnergy z = ComplexEnergy::off({1.0, 0.5});
  GreenValue a = green_nd(2, XVec{3, -1}, z, 1e-9);
  GreenValue b = green_nd(2, XVec{-3, 1}, z, 1e-9);
  CHECK(std::abs(a.value - b.value) < 1e-12);
  GreenValue c = green_nd(2, XVec{3, -1}, z.conjugated(), 1e-9);
  CHECK(std::abs(std::conj(a.value) - c.value) < 1e-12);
}

TEST_CASE("Herglotz property for nu = 1..3 at the origin") {
  for (int nu = 1; nu <= 3; ++nu) {
    XVec origin;
    origin.n = nu;
    for (int i = 0; i < 10; ++i)
      for (int j = 0; j < 10; ++j) {
        double re = -double(nu) - 0.5 + (2.0 * nu + 1.0) * i / 9.0;
        double im = 0.15 + 3.0 * j / 9.0;
        GreenValue g = green_nd(nu, origin, ComplexEnergy::off({re, im}), 1e-8);
        CHECK(g.value.imag() > 0.0);
      }
  }
}

TEST_CASE("boundary values at E + i0") {
  // nu = 1 dispatches to the closed form
  GreenValue a = green_nd_boundary(1, XVec{0}, 0.0, Side::upper);
  CHECK(std::abs(a.value - Complex(0, 1)) < 1e-15);
  CHECK(a.err == 0.0);

  // nu = 2, |E| > 2: boundary value is real
  GreenValue b = green_nd_boundary(2, XVec{0, 0}, 5.0, Side::upper, 1e-7);
  CHECK(std::abs(b.value.imag()) < 5e-6);

  // nu = 2, |E| < 2: positive imaginary part
  GreenValue c = green_nd_boundary(2, XVec{0, 0}, 0.0, Side::upper, 1e-7);
  CHECK(c.value.imag() > 0.1);

  // lower side conjugates
  GreenValue d = green_nd_boundary(2, XVec{0, 0}, 0.0, Side::lower, 1e-7);
  CHECK(std::abs(std::conj(c.value) - d.value) < 1e-9);

  CHECK_THROWS_AS(green_nd_boundary(2, XVec{0, 0}, 2.0005, Side::upper), NearSingularEnergy);
}

TEST_CASE("boundary limit agrees with an independent quadrature extrapolation") {
  // Independent route: epsilon sequence of direct torus quadratures with a
  // Neville extrapolation to eps = 0.
  GreenValue lim = green_nd_boundary(2, XVec{0, 0}, 0.8, Side::upper, 1e-7);
  std::vector<double> eps{0.32, 0.16, 0.08, 0.04, 0.02};
  std::vector<Complex> vals;
  for (double e : eps) vals.push_back(quadrature_green(2, XVec{0, 0}, {0.8, e}, 2048));
  for (size_t m = 1; m < vals.size(); ++m)
    for (size_t i = 0; i + m < vals.size(); ++i)
      vals[i] = (eps[i] * vals[i + 1] - eps[i + m] * vals[i]) / (eps[i] - eps[i + m]);
  CHECK(std::abs(lim.value - vals[0]) < 1e-5);
}

TEST_CASE("dos_1d") {
  CHECK(dos_1d(0.0) == doctest::Approx(1.0));
  CHECK(dos_1d(0.6) == doctest::Approx(1.25));
  CHECK(dos_1d(2.0) == 0.0);
  CHECK(dos_1d(0.0) == doctest::Approx(green_1d(0, ComplexEnergy::upper(0.0)).value.imag()));
}
