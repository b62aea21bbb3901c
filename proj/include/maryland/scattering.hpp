#pragma once

#include <functional>
#include <map>
#include <vector>

#include "maryland/resolvent.hpp"

namespace maryland {

// State label: plus-states are the E - i0 limits, minus-states the E + i0
// limits of (E - z) G(x, k; z).
enum class StateSign { plus, minus };

enum class ChannelClass { volume, surface };

struct ChannelTerm {
  long m = 0;
  Complex coefficient{0.0, 0.0};  // multiplies G0^(1)(x1; lambda +- i0) e^{2 pi i kappa.x2}
  KVec kappa;                     // transverse momentum of the channel
  double lambda = 0.0;            // channel energy E - E_{d2}(kappa)
  Complex eta_m{0.0, 0.0};        // eta(lambda +- i0) on the state's side
  Complex amplitude{0.0, 0.0};    // coefficient of e^{i eta |x1|}
  ChannelClass cls = ChannelClass::volume;
};

// Generalized eigenfunction: plane wave (volume states) plus channel terms.
// Immutable after construction; eval is safe for concurrent use.
struct ScatteringState {
  ModelParams params;
  KVec k;               // incident momentum (volume) or (j, k2) label (surface)
  double energy = 0.0;
  StateSign sign = StateSign::minus;
  Side side = Side::upper;
  bool has_plane_wave = true;
  int band_index = 0;   // surface states only
  std::vector<ChannelTerm> terms;

  Complex eval(const XVec& x) const;
  std::function<Complex(const XVec&)> evaluator() const {
    return [*this](const XVec& x) { return eval(x); };
  }
};

// Quasiperiodic volume state; series truncated per ctrl.  d1 = 1.
ScatteringState psi_qp(const KVec& k, StateSign sign, const ModelParams& p,
                       const SeriesControl& ctrl = {});

// Periodic volume state, exact finite sum (rational alpha, d1 = d2 = 1).
ScatteringState psi_periodic_volume(const KVec& k, StateSign sign, const ModelParams& p);

// Periodic surface state on band j at quasi-momentum k2.
ScatteringState psi_periodic_surface(double k2, int j, StateSign sign, const ModelParams& p);

// max over the box |x|_inf <= window of |(H0 psi)(x) + V(x) psi(x) - E psi(x)|.
double schrodinger_residual(const std::function<Complex(const XVec&)>& psi, double E,
                            const ModelParams& p, int window);

// Real-space kernel of the surface-restricted free resolvent at E +- i0,
// gamma0(l) for |l| <= lmax (d2 = 1); index the result at [l + lmax].
std::vector<Complex> gamma0_kernel_1d(double E, Side side, int lmax);

// Residual of the surface-restriction integral equation
//   psi(x2) + (gamma0 v psi)(x2) = e^{2 pi i k2 x2},
// with the convolution truncated to |y2| <= window_x2 under a smooth taper.
// mismatch_kernel_side flips the i0 prescription of the kernel only (the
// negative control discriminating the two boundary limits).
struct LSResidual {
  double residual = 0.0;
  double tail_estimate = 0.0;
};
LSResidual lippmann_schwinger_residual(const KVec& k, StateSign sign, const ModelParams& p,
                                       int window_x2, const SeriesControl& ctrl = {},
                                       bool mismatch_kernel_side = false);

// Residual of the homogeneous equation psi = -G0 V psi on the window
// (surface states with E outside [-2,2]).
double homogeneous_ls_residual(const ScatteringState& s, int window_x1, int x2_count);

// Partition of the channel terms by real vs complex eta (d1 = 1).
std::pair<std::vector<ChannelTerm>, std::vector<ChannelTerm>> split_volume_surface(
    const ScatteringState& s);

// Transmission/reflection data: t0 = 1 + Psi_0, r0 = Psi_0, and the open
// channel amplitudes m -> Psi_m.
struct Amplitudes {
  Complex t0{0.0, 0.0};
  Complex r0{0.0, 0.0};
  std::map<long, Complex> open_channels;
};
Amplitudes amplitudes(const KVec& k, const ModelParams& p, const SeriesControl& ctrl = {});

// 1-d point-potential reference: reflection amplitude for H0 + v delta_0 at
// incident momentum k, band energy E = -cos 2 pi k.  The closed form and the
// T-matrix route through green_1d are independent.
Complex point_reflection_reference(double k, double v);
Complex point_reflection_tmatrix(double k, double v);

}  // namespace maryland
