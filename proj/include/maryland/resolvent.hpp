#pragma once

#include "maryland/symbols.hpp"

namespace maryland {

struct SeriesControl {
  double tol = 1e-10;     // target absolute error of the m-series
  long max_terms = 10000;
  double gamma = 0.05;    // K_gamma parameter for on-axis tail control
  int quad_points = 2048; // torus nodes per dimension (d2 = 2 uses 256^2)
};

// Full Green function G(x,y;z) of the surface model, infinite m-series.
// Pre: Im z != 0, or boundary side with |E| <= d - ctrl.gamma (d1 = 1).
GreenValue green_full_qp(const XVec& x, const XVec& y, ComplexEnergy z,
                         const ModelParams& p, const SeriesControl& ctrl = {});

// Exact finite sum for rational alpha, d1 = d2 = 1.  On-axis evaluation
// deforms around the band poles of 1/(1 - P_q) (principal value plus the
// half-residue fixed by the approach side).
GreenValue green_full_periodic(const XVec& x, const XVec& y, ComplexEnergy z,
                               const ModelParams& p, int quad_points = 8192);

// Reference: Green function for the constant surface potential v (d1 = 1).
GreenValue green_constant_potential(const XVec& x, const XVec& y, ComplexEnergy z,
                                    const ModelParams& p, Complex v,
                                    int quad_points = 4096);

// Both sides of the ergodic relation for log|b_hat| at E + i0: the Birkhoff
// average over m_max shifts and the torus integral (the Lyapunov exponent of
// the partial products).  d2 = 1.
struct LyapunovResult {
  double birkhoff = 0.0;
  double integral = 0.0;
  double gap = 0.0;       // |birkhoff - integral|
  double quad_err = 0.0;
};
LyapunovResult lyapunov_exponent(double E, const ModelParams& p, long m_max = 10000);

}  // namespace maryland
