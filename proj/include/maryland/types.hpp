#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace maryland {

using Complex = std::complex<double>;

inline constexpr double pi = 3.141592653589793238462643383279502884;

// ---------------------------------------------------------------------------
// Error types.  Numeric routines throw these instead of returning sentinels.
// ---------------------------------------------------------------------------

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BranchPointError : NumericError {
  using NumericError::NumericError;
};
struct ConvergenceFailure : NumericError {
  using NumericError::NumericError;
};
struct NearSingularEnergy : NumericError {
  using NumericError::NumericError;
};
struct SingularPotential : NumericError {
  using NumericError::NumericError;
};
struct NearPole : NumericError {
  using NumericError::NumericError;
};
struct NearBandEdge : NumericError {
  using NumericError::NumericError;
};
struct OutsideDomain : NumericError {
  using NumericError::NumericError;
};
struct DegenerateEnergy : NumericError {
  using NumericError::NumericError;
};
struct ChannelAtThreshold : NumericError {
  using NumericError::NumericError;
};
struct SolveFailure : NumericError {
  using NumericError::NumericError;
};
struct BadConfig : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Spectral parameter z = E + i eps with an explicit marker for boundary
// values E + i0 / E - i0, so that on-axis limits are taken by closed form or
// extrapolation instead of by feeding a tiny epsilon into generic code.
// ---------------------------------------------------------------------------

enum class Side { upper, lower, off_axis };

struct ComplexEnergy {
  double re = 0.0;
  double im = 0.0;  // signed offset; 0 exactly when side is upper/lower
  Side side = Side::off_axis;

  static ComplexEnergy boundary(double energy, Side s) {
    if (s == Side::off_axis) throw BadConfig("boundary() needs upper or lower side");
    return {energy, 0.0, s};
  }
  static ComplexEnergy upper(double energy) { return {energy, 0.0, Side::upper}; }
  static ComplexEnergy lower(double energy) { return {energy, 0.0, Side::lower}; }
  static ComplexEnergy off(Complex z) {
    if (z.imag() == 0.0) throw BadConfig("off-axis energy needs Im z != 0");
    return {z.real(), z.imag(), Side::off_axis};
  }

  bool on_axis() const { return side != Side::off_axis; }
  // Sign of the approach direction: +1 for upper/positive Im, -1 otherwise.
  int half_plane() const {
    if (side == Side::upper) return 1;
    if (side == Side::lower) return -1;
    return im > 0 ? 1 : -1;
  }
  Complex value() const { return {re, im}; }
  ComplexEnergy shifted(double delta) const { return {re + delta, im, side}; }
  ComplexEnergy conjugated() const {
    if (side == Side::upper) return {re, 0.0, Side::lower};
    if (side == Side::lower) return {re, 0.0, Side::upper};
    return {re, -im, Side::off_axis};
  }
};

// Value of a Green function or symbol together with an a-posteriori error
// estimate from quadrature / extrapolation.  err == 0 only for closed forms.
struct GreenValue {
  Complex value{0.0, 0.0};
  double err = 0.0;
};

// ---------------------------------------------------------------------------
// Small fixed-capacity vectors for lattice points and torus momenta (d <= 4).
// ---------------------------------------------------------------------------

struct XVec {
  std::array<int, 4> c{};
  int n = 0;

  XVec() = default;
  XVec(std::initializer_list<int> v) {
    n = 0;
    for (int x : v) c[n++] = x;
  }
  static XVec scalar(int x) { return XVec{x}; }
  int operator[](int i) const { return c[i]; }
  int& operator[](int i) { return c[i]; }
  XVec operator-() const {
    XVec r = *this;
    for (int i = 0; i < n; ++i) r.c[i] = -r.c[i];
    return r;
  }
  friend XVec operator-(const XVec& a, const XVec& b) {
    XVec r = a;
    for (int i = 0; i < a.n; ++i) r.c[i] = a.c[i] - b.c[i];
    return r;
  }
  friend bool operator==(const XVec& a, const XVec& b) {
    if (a.n != b.n) return false;
    for (int i = 0; i < a.n; ++i)
      if (a.c[i] != b.c[i]) return false;
    return true;
  }
  XVec head(int m) const {
    XVec r;
    r.n = m;
    for (int i = 0; i < m; ++i) r.c[i] = c[i];
    return r;
  }
  XVec tail(int m) const {
    XVec r;
    r.n = m;
    for (int i = 0; i < m; ++i) r.c[i] = c[n - m + i];
    return r;
  }
  long abs_sum() const {
    long s = 0;
    for (int i = 0; i < n; ++i) s += std::abs(c[i]);
    return s;
  }
};

struct KVec {
  std::array<double, 4> c{};
  int n = 0;

  KVec() = default;
  KVec(std::initializer_list<double> v) {
    n = 0;
    for (double x : v) c[n++] = x;
  }
  static KVec scalar(double k) { return KVec{k}; }
  double operator[](int i) const { return c[i]; }
  double& operator[](int i) { return c[i]; }
  KVec head(int m) const {
    KVec r;
    r.n = m;
    for (int i = 0; i < m; ++i) r.c[i] = c[i];
    return r;
  }
  KVec tail(int m) const {
    KVec r;
    r.n = m;
    for (int i = 0; i < m; ++i) r.c[i] = c[n - m + i];
    return r;
  }
};

// Reduce to [0,1).
inline double mod1(double x) {
  double r = x - std::floor(x);
  if (r >= 1.0) r -= 1.0;
  return r;
}

// Distance to the nearest integer.
inline double dist_to_integer(double x) {
  double r = mod1(x);
  return std::min(r, 1.0 - r);
}

inline double dot(const KVec& k, const XVec& x) {
  double s = 0.0;
  for (int i = 0; i < k.n; ++i) s += k.c[i] * x.c[i];
  return s;
}

}  // namespace maryland
