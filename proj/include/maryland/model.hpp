#pragma once

#include "maryland/types.hpp"

namespace maryland {

// Frequency vector of the surface potential: a reduced rational p/q (d2 = 1)
// or an irrational real vector.
struct Alpha {
  bool rational = false;
  long p = 0;
  long q = 1;
  KVec value{0.0};

  static Alpha make_rational(long p, long q);
  static Alpha make_irrational(const KVec& a);
  static Alpha make_irrational(double a) { return make_irrational(KVec::scalar(a)); }
  // (sqrt(5)-1)/2, the default irrational frequency.
  static Alpha golden() { return make_irrational(0.61803398874989484820); }

  int dim() const { return value.n; }
};

struct ModelParams {
  int d1 = 1;
  int d2 = 1;
  double g = 1.0;
  Alpha alpha = Alpha::golden();
  double omega = 0.0;

  int d() const { return d1 + d2; }
  Complex sigma() const {  // e^{-2 pi i omega}
    return std::exp(Complex(0.0, -2.0 * pi * omega));
  }
  // Throws BadConfig / SingularPotential on invalid parameter combinations.
  void validate() const;

  // k2 shifted by l*alpha, reduced mod 1 componentwise.
  KVec shift_k2(const KVec& k2, long l) const;
};

// Surface potential v(x2) = g tan(pi (alpha . x2 + omega)).
// Throws SingularPotential when the phase is within 1e-9 of 1/2 mod 1.
double potential_v(const XVec& x2, const ModelParams& p);

// Dispersion of the nu-dimensional lattice Laplacian: -sum cos(2 pi k_i).
double energy_symbol(const KVec& k, int nu);

}  // namespace maryland
