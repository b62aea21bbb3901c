#pragma once

#include <Eigen/Sparse>
#include <vector>

#include "maryland/model.hpp"

namespace maryland {

// Finite Dirichlet box [-L1,L1] x [-L2,L2] for d = 2.
struct BoxSpec {
  int L1 = 40;
  int L2 = 40;
  long sites() const { return long(2 * L1 + 1) * long(2 * L2 + 1); }
};

// Bloch strip {|x1| <= L1} x {1..q} at quasi-momentum k2.
struct StripSpec {
  long q = 1;
  double k2 = 0.5;
  int L1 = 200;
};

// Sparse real symmetric Hamiltonian of the truncated model.
Eigen::SparseMatrix<double> box_hamiltonian(const ModelParams& p, const BoxSpec& box);

// Entry (x,y) of (H_box - z)^{-1} via a sparse solve; one factorization per
// call to the block version.
Complex box_resolvent(const XVec& x, const XVec& y, ComplexEnergy z,
                      const ModelParams& p, const BoxSpec& box);
std::vector<Complex> box_resolvent_block(const std::vector<XVec>& xs, const XVec& y,
                                         ComplexEnergy z, const ModelParams& p,
                                         const BoxSpec& box);

struct StripEigen {
  double value = 0.0;
  double surface_weight = 0.0;
  bool outside_channels = false;  // off the fiber's free bands: discrete spectrum
  bool surface_candidate = false;
};
// Eigen-decomposition of the Bloch fiber; surface candidates are the
// eigenvalues with >1/2 of the eigenvector mass on |x1| <= 2 lying outside
// every free channel band [-1 - cos(...), 1 - cos(...)].
std::vector<StripEigen> strip_eigenvalues(const ModelParams& p, const StripSpec& strip);

// Direct tensor-grid quadrature of the free lattice Green function; Im z > 0.
Complex quadrature_green(int nu, const XVec& x, Complex z, long n_min = 1024);

}  // namespace maryland
