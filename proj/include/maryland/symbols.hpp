#pragma once

#include <vector>

#include "maryland/lattice_green.hpp"
#include "maryland/model.hpp"

namespace maryland {

// Symbol of the surface-restricted free resolvent:
//   gamma0_hat(k2; z) = G0^(d1)(0; z - E_{d2}(k2)).
// Closed form (err = 0) for d1 = 1; Bessel/extrapolation route otherwise.
GreenValue gamma0_hat(const KVec& k2, ComplexEnergy z, const ModelParams& p);

// Cayley transform (g gamma0_hat - i) / (g gamma0_hat + i); a contraction in
// the closed upper half plane (|b_hat| <= 1, strict off axis).
Complex b_hat(const KVec& k2, ComplexEnergy z, const ModelParams& p);

// 1 / (g gamma0_hat(k2;z) + i), the recurring amplitude factor.
Complex inv_gamma_denom(const KVec& k2, ComplexEnergy z, const ModelParams& p);

// Indicator of K_gamma(E) = {k2 : E - E_{d2}(k2) in [-d1+gamma, d1-gamma]}.
bool k_gamma_membership(const KVec& k2, double E, double gamma, const ModelParams& p);

// Lebesgue measure of K_gamma(E) for d2 = 1 from the arccos geometry.
double k_gamma_measure_1d(double E, double gamma, const ModelParams& p);

// Momenta in [0,1) where the channel energy E + cos(2 pi k) crosses +-1,
// i.e. the inverse-square-root kinks of the boundary symbols (d2 = 1).
std::vector<double> channel_edges_1d(double E);

// Partial product P_m(k2;z) = sigma^m prod_{l=1..m} b_hat(k2 + l alpha; z).
Complex partial_product(long m, const KVec& k2, ComplexEnergy z, const ModelParams& p);

// T-operator coefficients.  Series convention (any alpha):
//   t_0 = -g A(k2),  t_m = 2ig sigma^m A(k2) A(k2+m alpha)
//                          prod_{l=1..m-1} b_hat(k2 + l alpha; z),   m >= 1,
// with A = inv_gamma_denom.  Resummed convention (rational alpha = p/q,
// 0 <= m <= q): the same numerators divided by (1 - P_q(k2;z)) for m >= 1.
Complex t_coefficient_series(long m, const KVec& k2, ComplexEnergy z, const ModelParams& p);
Complex t_coefficient_resummed(long m, const KVec& k2, ComplexEnergy z, const ModelParams& p);
// Dispatch: resummed for rational alpha, series otherwise.
Complex t_coefficient(long m, const KVec& k2, ComplexEnergy z, const ModelParams& p);

// Energy derivatives for the periodic pole calculus (d1 = 1).
Complex dgamma0_dE(const KVec& k2, ComplexEnergy z, const ModelParams& p);
Complex db_hat_dE(const KVec& k2, ComplexEnergy z, const ModelParams& p);
Complex dPq_dE(const KVec& k2, ComplexEnergy z, const ModelParams& p);
Complex dPq_dk(const KVec& k2, ComplexEnergy z, const ModelParams& p);

// Contraction data used for series tail control.  Off axis rho is the grid
// maximum of |b_hat|; on axis rho = (1 - delta)^{measure/2} with delta
// measured on K_gamma(E).
struct ContractionEstimate {
  double rho = 1.0;
  double delta = 0.0;
  double measure = 0.0;
};
ContractionEstimate contraction_rate(ComplexEnergy z, const ModelParams& p,
                                     double gamma, int grid = 1024);

}  // namespace maryland
