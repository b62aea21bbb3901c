#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "maryland/symbols.hpp"

using namespace maryland;

namespace {

ModelParams base_params() {
  ModelParams p;
  p.d1 = p.d2 = 1;
  p.g = 1.0;
  p.alpha = Alpha::golden();
  p.omega = 0.2;
  return p;
}

}  // namespace

TEST_CASE("surface potential values and the Cayley form") {
  ModelParams p = base_params();
  p.omega = 0.25;
  CHECK(potential_v(XVec{0}, p) == doctest::Approx(1.0));

  ModelParams p2 = base_params();
  p2.g = 2.0;
  p2.omega = 0.0;
  CHECK(potential_v(XVec{0}, p2) == doctest::Approx(0.0));

  ModelParams p3 = base_params();
  p3.alpha = Alpha::make_rational(1, 3);
  p3.omega = 0.2;
  CHECK(potential_v(XVec{1}, p3) ==
        doctest::Approx(std::tan(pi * (1.0 / 3.0 + 0.2))).epsilon(1e-12));

  // Pointwise equality with (g/i)(1 - sigma u)(1 + sigma u)^{-1}.
  ModelParams p4 = base_params();
  for (int x2 = -7; x2 <= 7; ++x2) {
    Complex u = std::exp(Complex(0.0, -2.0 * pi * p4.alpha.value.c[0] * x2));
    Complex cay = p4.g / Complex(0.0, 1.0) * (1.0 - p4.sigma() * u) / (1.0 + p4.sigma() * u);
    CHECK(std::abs(cay.imag()) < 1e-10);
    CHECK(potential_v(XVec{x2}, p4) == doctest::Approx(cay.real()).epsilon(1e-10));
  }

  ModelParams sing = base_params();
  sing.alpha = Alpha::make_rational(0, 1);
  sing.omega = 0.5;
  CHECK_THROWS_AS(sing.validate(), SingularPotential);
}

TEST_CASE("energy symbol") {
  CHECK(energy_symbol(KVec{0.0, 0.0}, 2) == doctest::Approx(-2.0));
  CHECK(energy_symbol(KVec{0.25, 0.25}, 2) == doctest::Approx(0.0));
  CHECK(energy_symbol(KVec{1.0 / 3.0, 1.0 / 6.0}, 2) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("gamma0_hat through the 1-d closed form") {
  ModelParams p = base_params();
  CHECK(std::abs(gamma0_hat(KVec{0.25}, ComplexEnergy::upper(0.0), p).value - Complex(0, 1)) <
        1e-14);
  // argument z - E_1(0) = 3 + 1 = 4
  CHECK(std::abs(gamma0_hat(KVec{0.0}, ComplexEnergy::upper(3.0), p).value +
                 1.0 / std::sqrt(15.0)) < 1e-14);
  // Herglotz: Im gamma0 > 0 for Im z > 0
  for (double k2 : {0.0, 0.2, 0.45, 0.8})
    CHECK(gamma0_hat(KVec{k2}, ComplexEnergy::off({0.3, 0.7}), p).value.imag() > 0.0);
}

TEST_CASE("b_hat contraction and boundary bounds") {
  ModelParams p = base_params();
  CHECK(std::abs(b_hat(KVec{0.25}, ComplexEnergy::upper(0.0), p)) < 1e-13);

  // closed channel (real symbol beyond [-1,1]): |b_hat| = 1
  CHECK(std::abs(std::abs(b_hat(KVec{0.0}, ComplexEnergy::upper(3.0), p)) - 1.0) < 1e-13);

  // strict contraction off axis on a 1000-point grid
  double rho = 0.0;
  for (int i = 0; i < 1000; ++i)
    rho = std::max(rho, std::abs(b_hat(KVec{(i + 0.5) / 1000.0},
                                       ComplexEnergy::off({0.4, 0.8}), p)));
  CHECK(rho < 1.0);

  // boundary bound |b_hat(E+i0)| <= 1 + 1e-12 across energies
  for (double E : {-2.5, -1.0, 0.0, 0.7, 1.8, 3.0})
    for (int i = 0; i < 200; ++i)
      CHECK(std::abs(b_hat(KVec{(i + 0.5) / 200.0}, ComplexEnergy::upper(E), p)) <=
            1.0 + 1e-12);
}

TEST_CASE("K_gamma membership and measure") {
  ModelParams p = base_params();
  CHECK(k_gamma_membership(KVec{0.25}, 0.0, 0.1, p));
  CHECK_FALSE(k_gamma_membership(KVec{0.5}, 1.95, 0.1, p));

  for (double E : {0.0, 0.9, 1.5}) {
    double analytic = k_gamma_measure_1d(E, 0.1, p);
    long cnt = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i)
      if (k_gamma_membership(KVec{(i + 0.5) / double(n)}, E, 0.1, p)) ++cnt;
    CHECK(std::abs(double(cnt) / n - analytic) < 1e-3);
  }
}

TEST_CASE("partial products") {
  ModelParams p = base_params();
  // single vanishing factor: k2 + alpha at the Cayley zero
  double k0 = mod1(0.25 - p.alpha.value.c[0]);
  CHECK(std::abs(partial_product(1, KVec{k0}, ComplexEnergy::upper(0.0), p)) < 1e-13);

  // rational alpha: P_q is 1/q-periodic in k2
  ModelParams pr = base_params();
  pr.alpha = Alpha::make_rational(2, 5);
  ComplexEnergy z = ComplexEnergy::off({0.3, 0.6});
  for (double k2 : {0.12, 0.4}) {
    Complex a = partial_product(5, KVec{k2}, z, pr);
    Complex b = partial_product(5, KVec{mod1(k2 + 0.2)}, z, pr);
    CHECK(std::abs(a - b) < 1e-12);
  }

  // |P_m| <= 1 in the closed upper half plane
  for (long m : {1L, 5L, 20L})
    CHECK(std::abs(partial_product(m, KVec{0.3}, ComplexEnergy::upper(0.4), p)) <= 1.0 + 1e-12);
}

TEST_CASE("t coefficients: m = 0 and the geometric resummation identity") {
  ModelParams p = base_params();
  ComplexEnergy z = ComplexEnergy::off({0.2, 1.0});
  Complex t0 = t_coefficient_series(0, KVec{0.3}, z, p);
  Complex expect = -p.g * inv_gamma_denom(KVec{0.3}, z, p);
  CHECK(std::abs(t0 - expect) < 1e-15);

  for (long q : {2L, 3L, 5L}) {
    ModelParams pr = base_params();
    pr.alpha = Alpha::make_rational(1, q);
    CHECK(std::abs(t_coefficient_resummed(0, KVec{0.3}, z, pr) - t0) < 1e-14);
    for (long m = 1; m <= std::min(q, 3L); ++m) {
      Complex series{0.0, 0.0};
      for (long rep = 0; rep < 80; ++rep)
        series += t_coefficient_series(m + rep * q, KVec{0.3}, z, pr);
      Complex res = t_coefficient_resummed(m, KVec{0.3}, z, pr);
      CHECK(std::abs(series - res) < 1e-10);
    }
  }
}

TEST_CASE("q = 1 resummed coefficients reproduce the constant-potential kernel") {
  // With q = 1 the potential is the constant v0 = g tan(pi omega) and the
  // summed coefficient equals -v0 / (1 + v0 gamma0).
  for (double omega : {0.1, 0.25, 0.4}) {
    ModelParams p = base_params();
    p.alpha = Alpha::make_rational(0, 1);
    p.omega = omega;
    double v0 = p.g * std::tan(pi * omega);
    for (Complex zc : {Complex{0.0, 3.0}, Complex{1.2, 0.5}, Complex{-0.7, 2.0}}) {
      ComplexEnergy z = ComplexEnergy::off(zc);
      Complex tsum = t_coefficient_resummed(0, KVec{0.3}, z, p) +
                     t_coefficient_resummed(1, KVec{0.3}, z, p);
      Complex g0 = gamma0_hat(KVec{0.3}, z, p).value;
      CHECK(std::abs(tsum - (-v0 / (1.0 + v0 * g0))) < 1e-12);
    }
  }
}

TEST_CASE("NearPole guard for resummed coefficients") {
  // q = 1, omega = 1/4, g = 1: the band is E = sqrt(2) - cos(2 pi k2); at an
  // on-band (k2, E) pair 1 - P_q vanishes.
  ModelParams p = base_params();
  p.alpha = Alpha::make_rational(0, 1);
  p.omega = 0.25;
  double k2 = 0.3;
  double E = std::sqrt(2.0) - std::cos(2.0 * pi * k2);
  CHECK_THROWS_AS(t_coefficient_resummed(1, KVec{k2}, ComplexEnergy::upper(E), p), NearPole);
}

TEST_CASE("analytic dP_q/dE and dP_q/dk match finite differences") {
  ModelParams p = base_params();
  p.alpha = Alpha::make_rational(1, 3);
  ComplexEnergy z = ComplexEnergy::off({2.6, 0.4});
  const double h = 1e-6;

  Complex de = dPq_dE(KVec{0.21}, z, p);
  Complex de_fd = (partial_product(3, KVec{0.21}, ComplexEnergy::off({2.6 + h, 0.4}), p) -
                   partial_product(3, KVec{0.21}, ComplexEnergy::off({2.6 - h, 0.4}), p)) /
                  (2.0 * h);
  CHECK(std::abs(de - de_fd) < 1e-7);

  Complex dk = dPq_dk(KVec{0.21}, z, p);
  Complex dk_fd = (partial_product(3, KVec{0.21 + h}, z, p) -
                   partial_product(3, KVec{0.21 - h}, z, p)) /
                  (2.0 * h);
  CHECK(std::abs(dk - dk_fd) < 1e-5);
}
