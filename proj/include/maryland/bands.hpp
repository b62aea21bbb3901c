#pragma once

#include <optional>
#include <string>
#include <vector>

#include "maryland/symbols.hpp"

namespace maryland {

// Single-channel phase (1/pi) arctan(sqrt((E + cos 2 pi k2)^2 - 1)/g) on the
// branch E >= 1 - cos(2 pi k2); increasing in E with values in [0, 1/2).
double phase_phi(double k2, double E, double g);

// Lowest admissible energy at k2: max_l (1 - cos 2 pi (k2 + l alpha)).
double threshold_energy(double k2, const ModelParams& p);

// Total phase Phi_q(k2,E) = sum_{l=1..q} phase_phi(k2 + l alpha, E) and its
// energy derivative.  Rational alpha, d1 = d2 = 1.
double phase_Phi_q(double k2, double E, const ModelParams& p);
double phase_Phi_q_dE(double k2, double E, const ModelParams& p);

// Integer offset fixing the band labels: floor of the minimum over one
// period of Phi_q(k2, threshold(k2)) - q omega.
long alpha_omega_offset(const ModelParams& p);

// Unique E with Phi_q(k2,E) - q omega = alpha_omega + j, when k2 is in the
// band domain D_j; nullopt otherwise.  Negative j via the staggered
// symmetry that maps the spectrum to -spectrum of (g, -alpha, 1-omega).
std::optional<double> solve_band(int j, double k2, const ModelParams& p);

struct BandFunction {
  int j = 0;
  long q = 1;
  std::vector<std::pair<double, double>> samples;  // (k2, E) where solvable
  std::vector<std::pair<double, double>> domain;   // D_j as closed intervals
  std::vector<double> excluded;                    // D'_j threshold touchings
  double lo = 0.0, hi = 0.0;  // range refined past the sample grid
  std::vector<std::pair<double, double>> stationary;  // (k2, E) interior stationary points
  double emin() const { return lo; }
  double emax() const { return hi; }
  bool empty() const { return samples.empty(); }
};
BandFunction band_curve(int j, const ModelParams& p, int n_samples = 512);

struct SpectrumInterval {
  double lo = 0, hi = 0;
  std::vector<std::string> provenance;
};
struct Spectrum {
  std::vector<SpectrumInterval> intervals;  // sorted, disjoint
  bool contains(double E, double tol = 1e-12) const;
};
Spectrum assemble_spectrum(const ModelParams& p, int max_j_scan = 64);

struct BandDiagnostics {
  struct BandInfo {
    int j;
    double emin, emax, width;
  };
  std::vector<BandInfo> bands;       // positive and negative indices
  double min_separation = 0.0;       // eta_q over adjacent pairs, shared domain
  double delta_phi = 0.0;            // Phi_q(k*,2) - Phi_q(k*,threshold), k* at window edge
  std::vector<double> phi_fourier;   // |phi-hat_{q n}(E=3)| for n = 0,1,2
};
BandDiagnostics band_diagnostics(const ModelParams& p, int n_samples = 512);

// Stationary energies of the band functions, domain-boundary energies, and
// the free band edges -2, 2.
std::vector<double> critical_energies(const ModelParams& p, int n_samples = 512);

// Poles of 1/(1 - P_q(.,E+i0)) in [0,1): the k2 where a band crosses E.
std::vector<double> band_crossings(double E, const ModelParams& p);

// Torus average of the channel phase, f(E) = int phi(k2,E) dk2, defined and
// increasing for E > 2; the q -> infinity limit of Phi_q / q.
double diophantine_f(double E, double g);

// Solve f(E) = target (target in (f(2),1/2)) on (2,inf); nullopt outside Ran f.
std::optional<double> diophantine_root(double target, double g);

struct LimitRow {
  int n = 0;
  long p = 0, q = 0;
  int x2 = 0;
  bool has_root = false;
  double E_diophantine = 0.0;
  double band_mid = 0.0;
  double distance = 0.0;
};
// Rational-approximation study: for each convergent p_n/q_n and each x2,
// pair the quasiperiodic eigenvalue rule's root with the nearest surface
// band midpoint of the periodic operator.
std::vector<LimitRow> limit_comparison(double alpha_target,
                                       const std::vector<std::pair<long, long>>& convergents,
                                       const std::vector<int>& x2_range,
                                       const ModelParams& p);

}  // namespace maryland
