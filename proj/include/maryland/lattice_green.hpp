#pragma once

#include "maryland/types.hpp"

namespace maryland {

// Branch of sqrt(z^2-1) with cut on [-1,1], asymptotic to z at infinity.
Complex sqrt_z2m1(Complex z);

// Side-aware boundary value of the same branch at E +- i0.
Complex sqrt_z2m1_at(ComplexEnergy z);

// Phase function of the 1-d lattice Green function: -cos(eta) = z with
// Im eta >= 0 in the closed upper half plane.  On axis:
//   |E| < 1  -> eta in (0,pi),  E > 1 -> pi + i R_+,  E < -1 -> i R_+.
// Branch points z = +-1 return the limiting values pi and 0.
Complex eta(ComplexEnergy z);

// Closed-form 1-d Green function -exp(i eta |x|) / sqrt(z^2-1); err = 0.
// Throws BranchPointError at exactly z = +-1 on axis.
GreenValue green_1d(long x, ComplexEnergy z);

// nu-dimensional Green function at lattice point x.  nu = 1 dispatches to
// the closed form; nu >= 2 uses the Bessel time integral (off axis) or the
// epsilon-extrapolated boundary limit (side = upper/lower).
GreenValue green_nd(int nu, const XVec& x, ComplexEnergy z, double target_err = 1e-10);

// Boundary value at E +- i0 by geometric epsilon sequence with Richardson
// extrapolation; err is the extrapolation residual.  Near |E| = 2 (nu = 2)
// the log singularity makes extrapolation stall: NearSingularEnergy.
GreenValue green_nd_boundary(int nu, const XVec& x, double E, Side side,
                             double target_err = 1e-8);

// Im G0^(1)(0; E+i0): (1-E^2)^{-1/2} inside the band, 0 outside.
double dos_1d(double E);

}  // namespace maryland
