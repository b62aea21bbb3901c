#include "maryland/lattice_green.hpp"

#include <cmath>
#include <vector>

namespace maryland {

namespace {

// 12-point Gauss-Legendre nodes/weights on [-1,1].
constexpr int kGL = 12;
constexpr double kGLx[kGL] = {
    -0.9815606342467192, -0.9041172563704749, -0.7699026741943047,
    -0.5873179542866175, -0.3678314989981802, -0.1252334085114689,
    0.1252334085114689,  0.3678314989981802,  0.5873179542866175,
    0.7699026741943047,  0.9041172563704749,  0.9815606342467192};
constexpr double kGLw[kGL] = {
    0.0471753363865118, 0.1069393259953184, 0.1600783285433462,
    0.2031674267230659, 0.2334925365383548, 0.2491470458134028,
    0.2491470458134028, 0.2334925365383548, 0.2031674267230659,
    0.1600783285433462, 0.1069393259953184, 0.0471753363865118};

// Embedded 6-point rule reusing no nodes; used for the error estimate.
constexpr int kGL2 = 6;
constexpr double kGL2x[kGL2] = {-0.9324695142031521, -0.6612093864662645,
                                -0.2386191860831969, 0.2386191860831969,
                                0.6612093864662645,  0.9324695142031521};
constexpr double kGL2w[kGL2] = {0.1713244923791704, 0.3607615730481386,
                                0.4679139345726910, 0.4679139345726910,
                                0.3607615730481386, 0.1713244923791704};

Complex eta_upper_axis(double E) {
  if (E == 1.0) return {pi, 0.0};
  if (E == -1.0) return {0.0, 0.0};
  if (std::abs(E) < 1.0) return {std::acos(-E), 0.0};
  if (E > 1.0) return {pi, std::acosh(E)};
  return {0.0, std::acosh(-E)};
}

// i^n for integer n.
Complex ipow(long n) {
  switch (((n % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

// Integrand of the Bessel time representation at time t.
Complex bessel_product(const XVec& x, double t) {
  double p = 1.0;
  for (int i = 0; i < x.n; ++i) p *= std::cyl_bessel_j(double(std::abs(x.c[i])), t);
  return p * ipow(x.abs_sum());
}

// G0^(nu)(x; z) = i * int_0^inf e^{izt} prod_l i^{|x_l|} J_{|x_l|}(t) dt,
// valid for Im z > 0.  Composite Gauss-Legendre panels up to a cutoff T with
// e^{-Im z * T}/Im z below the target; err combines tail and quadrature.
GreenValue green_time_integral(int nu, const XVec& x, Complex z, double target_err) {
  const double eps = z.imag();
  if (!(eps > 0)) throw ConvergenceFailure("time integral needs Im z > 0");

  double T = std::log(2.0 / (eps * std::max(target_err, 1e-14))) / eps;
  // The integrand carries an extra t^{-nu/2} decay; shrink T once with it.
  if (T > 2.0) {
    double pref = std::pow(2.0 / (pi * T), 0.5 * nu);
    double T2 = std::log(2.0 * pref / (eps * std::max(target_err, 1e-14))) / eps;
    T = std::max(2.0, T2);
  }
  if (T > 2.0e5) throw ConvergenceFailure("time-integral cutoff too large for target err");

  const double freq = 1.0 + std::abs(z.real()) + nu;
  const double h = std::min(1.5, 7.0 / freq);
  const long panels = std::max<long>(4, (long)std::ceil(T / h));
  const double hp = T / double(panels);

  Complex sum{0.0, 0.0}, sum_lo{0.0, 0.0};
  for (long p = 0; p < panels; ++p) {
    const double a = p * hp;
    Complex acc{0.0, 0.0}, acc_lo{0.0, 0.0};
    for (int i = 0; i < kGL; ++i) {
      const double t = a + 0.5 * hp * (kGLx[i] + 1.0);
      acc += kGLw[i] * std::exp(Complex(0.0, 1.0) * z * t) * bessel_product(x, t);
    }
    for (int i = 0; i < kGL2; ++i) {
      const double t = a + 0.5 * hp * (kGL2x[i] + 1.0);
      acc_lo += kGL2w[i] * std::exp(Complex(0.0, 1.0) * z * t) * bessel_product(x, t);
    }
    sum += 0.5 * hp * acc;
    sum_lo += 0.5 * hp * acc_lo;
  }
  const double tail = std::pow(2.0 / (pi * std::max(T, 2.0)), 0.5 * nu) *
                      std::exp(-eps * T) / eps;
  GreenValue g;
  g.value = Complex(0.0, 1.0) * sum;
  g.err = std::abs(sum - sum_lo) + tail;
  return g;
}

}  // namespace

Complex sqrt_z2m1(Complex z) { return std::sqrt(z - 1.0) * std::sqrt(z + 1.0); }

Complex sqrt_z2m1_at(ComplexEnergy z) {
  if (!z.on_axis()) return sqrt_z2m1(z.value());
  const double E = z.re;
  Complex up;
  if (std::abs(E) < 1.0)
    up = Complex(0.0, std::sqrt(1.0 - E * E));
  else if (E >= 1.0)
    up = Complex(std::sqrt(E * E - 1.0), 0.0);
  else
    up = Complex(-std::sqrt(E * E - 1.0), 0.0);
  return z.side == Side::upper ? up : std::conj(up);
}

Complex eta(ComplexEnergy z) {
  switch (z.side) {
    case Side::upper: return eta_upper_axis(z.re);
    case Side::lower: return -std::conj(eta_upper_axis(z.re));
    default: {
      Complex zc = z.value();
      return Complex(0.0, -1.0) * std::log(-zc + sqrt_z2m1(zc));
    }
  }
}

GreenValue green_1d(long x, ComplexEnergy z) {
  if (z.on_axis() && std::abs(std::abs(z.re) - 1.0) == 0.0)
    throw BranchPointError("G0^(1) diverges at z = +-1; use eps > 0");

  auto upper_axis = [&](double E) -> Complex {
    Complex et = eta_upper_axis(E);
    Complex root;  // boundary value of sqrt(z^2-1) from above
    if (std::abs(E) < 1.0)
      root = Complex(0.0, std::sqrt(1.0 - E * E));
    else if (E > 1.0)
      root = Complex(std::sqrt(E * E - 1.0), 0.0);
    else
      root = Complex(-std::sqrt(E * E - 1.0), 0.0);
    return -std::exp(Complex(0.0, 1.0) * et * double(std::labs(x))) / root;
  };

  Complex v;
  if (z.side == Side::upper)
    v = upper_axis(z.re);
  else if (z.side == Side::lower)
    v = std::conj(upper_axis(z.re));
  else {
    Complex zc = z.value();
    Complex et = Complex(0.0, -1.0) * std::log(-zc + sqrt_z2m1(zc));
    v = -std::exp(Complex(0.0, 1.0) * et * double(std::labs(x))) / sqrt_z2m1(zc);
  }
  return {v, 0.0};
}

GreenValue green_nd(int nu, const XVec& x, ComplexEnergy z, double target_err) {
  if (nu < 1 || nu > 3) throw BadConfig("green_nd supports nu in {1,2,3}");
  if (x.n != nu) throw BadConfig("green_nd: point dimension mismatch");
  if (nu == 1) return green_1d(x.c[0], z);
  if (z.on_axis()) return green_nd_boundary(nu, x, z.re, z.side, target_err);
  if (z.im < 0) {
    GreenValue g = green_nd(nu, x, z.conjugated(), target_err);
    return {std::conj(g.value), g.err};
  }
  return green_time_integral(nu, x, z.value(), target_err);
}

GreenValue green_nd_boundary(int nu, const XVec& x, double E, Side side,
                             double target_err) {
  if (side == Side::off_axis) throw BadConfig("boundary limit needs a side");
  if (nu == 1) return green_1d(x.c[0], ComplexEnergy::boundary(E, side));
  if (nu == 2 && std::abs(std::abs(E) - 2.0) < 1e-3)
    throw NearSingularEnergy("nu = 2 boundary value excluded near |E| = 2");

  // Evaluate from the upper half plane; the lower side is the conjugate.
  const double eps0 = 0.4;
  const int max_levels = 8;
  std::vector<double> epss;
  std::vector<Complex> vals;
  Complex best{0.0, 0.0};
  double best_err = 1e300;
  for (int j = 0; j < max_levels; ++j) {
    const double ej = eps0 * std::pow(0.5, j);
    GreenValue gj = green_time_integral(nu, x, Complex(E, ej),
                                        std::min(target_err * 0.1, 1e-9));
    epss.push_back(ej);
    vals.push_back(gj.value);
    if (j == 0) {
      best = gj.value;
      continue;
    }
    // Neville extrapolation of the polynomial-in-eps model to eps = 0.
    std::vector<Complex> t = vals;
    for (size_t m = 1; m < t.size(); ++m)
      for (size_t i = 0; i + m < t.size(); ++i) {
        const double e_i = epss[i], e_im = epss[i + m];
        t[i] = (e_i * t[i + 1] - e_im * t[i]) / (e_i - e_im);
      }
    Complex extrap = t[0];
    double resid = std::abs(extrap - best);
    best = extrap;
    best_err = resid + gj.err;
    if (j >= 2 && best_err < target_err) break;
  }
  if (nu == 2 && best_err > 1e3 * target_err &&
      std::abs(std::abs(E) - 2.0) < 5e-3)
    throw NearSingularEnergy("boundary extrapolation stalled near |E| = 2");
  if (side == Side::lower) best = std::conj(best);
  return {best, best_err};
}

double dos_1d(double E) {
  if (std::abs(E) < 1.0) return 1.0 / std::sqrt(1.0 - E * E);
  return 0.0;
}

}  // namespace maryland
