#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "maryland/lattice_green.hpp"
#include "maryland/oracle.hpp"

using namespace maryland;

namespace {

ModelParams golden_params() {
  ModelParams p;
  p.d1 = p.d2 = 1;
  p.g = 1.0;
  p.alpha = Alpha::golden();
  p.omega = 0.2;
  return p;
}

}  // namespace

TEST_CASE("box Hamiltonian structure") {
  ModelParams p = golden_params();
  BoxSpec box{8, 8};
  auto h = box_hamiltonian(p, box);
  Eigen::SparseMatrix<double> diff = Eigen::SparseMatrix<double>(h.transpose()) - h;
  CHECK(diff.norm() < 1e-14);

  // diagonal on the surface column equals the potential
  Eigen::MatrixXd hd = Eigen::MatrixXd(h);
  for (int x2 = -8; x2 <= 8; ++x2) {
    long idx = (0 + 8) * 17 + (x2 + 8);
    CHECK(hd(idx, idx) == doctest::Approx(potential_v(XVec{x2}, p)).epsilon(1e-14));
  }

  // near-zero coupling: spectrum inside [-2 - tol, 2 + tol]
  ModelParams pz = golden_params();
  pz.g = 1e-8;
  Eigen::MatrixXd hz = Eigen::MatrixXd(box_hamiltonian(pz, box));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hz);
  CHECK(es.eigenvalues().minCoeff() > -2.0 - 1e-6);
  CHECK(es.eigenvalues().maxCoeff() < 2.0 + 1e-6);
}

TEST_CASE("box resolvent agrees with the free Green function at weak coupling") {
  ModelParams p = golden_params();
  p.g = 1e-8;
  BoxSpec box{40, 40};
  ComplexEnergy z = ComplexEnergy::off({0.0, 5.0});
  for (auto [x, y] : std::vector<std::pair<XVec, XVec>>{
           {XVec{0, 0}, XVec{0, 0}}, {XVec{3, 2}, XVec{0, 0}}}) {
    Complex oracle = box_resolvent(x, y, z, p, box);
    GreenValue free = green_nd(2, x - y, z, 1e-10);
    CHECK(std::abs(oracle - free.value) < 1e-6);
  }
}

TEST_CASE("box resolvent adjoint identity") {
  ModelParams p = golden_params();
  BoxSpec box{20, 20};
  ComplexEnergy z = ComplexEnergy::off({0.4, 0.7});
  Complex a = box_resolvent(XVec{1, 2}, XVec{-1, 0}, z.conjugated(), p, box);
  Complex b = box_resolvent(XVec{-1, 0}, XVec{1, 2}, z, p, box);
  CHECK(std::abs(a - std::conj(b)) < 1e-12);
}

TEST_CASE("strip oracle: q = 1 closed form") {
  ModelParams p = golden_params();
  p.alpha = Alpha::make_rational(0, 1);
  p.omega = 0.25;
  StripSpec strip{1, 0.0, 200};
  auto evs = strip_eigenvalues(p, strip);
  double target = std::sqrt(2.0) - 1.0;  // E_1(0) = sqrt(2) - cos(0)
  double best = 1e300;
  long candidates = 0;
  for (auto& se : evs) {
    if (se.surface_candidate) {
      ++candidates;
      best = std::min(best, std::abs(se.value - target));
    }
  }
  CHECK(best < 1e-3);
  CHECK(candidates <= 1 + 1);  // q/2 + 1 slack for edge effects

  // refinement stability under L1 doubling
  StripSpec strip2{1, 0.0, 400};
  auto evs2 = strip_eigenvalues(p, strip2);
  double best2 = 1e300;
  for (auto& se : evs2)
    if (se.surface_candidate) best2 = std::min(best2, std::abs(se.value - target));
  CHECK(std::abs(best - best2) < 1e-4);
}

TEST_CASE("quadrature green sanity") {
  // values already cross-checked against green_1d/green_nd elsewhere; here
  // the evenness and conjugation of the direct sum
  Complex a = quadrature_green(2, XVec{2, -1}, {0.3, 0.8}, 512);
  Complex b = quadrature_green(2, XVec{-2, 1}, {0.3, 0.8}, 512);
  CHECK(std::abs(a - b) < 1e-12);
  CHECK_THROWS_AS(quadrature_green(1, XVec{0}, {0.3, -0.5}), BadConfig);
}
