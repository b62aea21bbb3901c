#include "maryland/oracle.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseLU>
#include <cmath>

namespace maryland {

namespace {

long box_index(const XVec& x, const BoxSpec& box) {
  return (long(x.c[0]) + box.L1) * long(2 * box.L2 + 1) + (long(x.c[1]) + box.L2);
}

}  // namespace

Eigen::SparseMatrix<double> box_hamiltonian(const ModelParams& p, const BoxSpec& box) {
  p.validate();
  if (p.d1 != 1 || p.d2 != 1) throw BadConfig("box oracle implemented for d1 = d2 = 1");
  if (box.sites() > 100000) throw BadConfig("box exceeds the desk-scale site cap");

  const long n = box.sites();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(5 * n);
  for (int x1 = -box.L1; x1 <= box.L1; ++x1)
    for (int x2 = -box.L2; x2 <= box.L2; ++x2) {
      XVec x{x1, x2};
      long i = box_index(x, box);
      if (x1 == 0) trip.emplace_back(i, i, potential_v(x.tail(1), p));
      if (x1 + 1 <= box.L1)
        trip.emplace_back(i, box_index(XVec{x1 + 1, x2}, box), -0.5);
      if (x1 - 1 >= -box.L1)
        trip.emplace_back(i, box_index(XVec{x1 - 1, x2}, box), -0.5);
      if (x2 + 1 <= box.L2)
        trip.emplace_back(i, box_index(XVec{x1, x2 + 1}, box), -0.5);
      if (x2 - 1 >= -box.L2)
        trip.emplace_back(i, box_index(XVec{x1, x2 - 1}, box), -0.5);
    }
  Eigen::SparseMatrix<double> h(n, n);
  h.setFromTriplets(trip.begin(), trip.end());
  return h;
}

std::vector<Complex> box_resolvent_block(const std::vector<XVec>& xs, const XVec& y,
                                         ComplexEnergy z, const ModelParams& p,
                                         const BoxSpec& box) {
  if (z.on_axis()) throw BadConfig("box resolvent needs Im z != 0");
  Eigen::SparseMatrix<double> h = box_hamiltonian(p, box);
  Eigen::SparseMatrix<Complex> a = h.cast<Complex>();
  const long n = h.rows();
  for (long i = 0; i < n; ++i) a.coeffRef(i, i) -= z.value();
  a.makeCompressed();

  Eigen::SparseLU<Eigen::SparseMatrix<Complex>> lu;
  lu.compute(a);
  if (lu.info() != Eigen::Success) throw SolveFailure("sparse factorization failed");

  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n);
  rhs[box_index(y, box)] = 1.0;
  Eigen::VectorXcd col = lu.solve(rhs);
  if (lu.info() != Eigen::Success) throw SolveFailure("sparse solve failed");

  std::vector<Complex> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(col[box_index(x, box)]);
  return out;
}

Complex box_resolvent(const XVec& x, const XVec& y, ComplexEnergy z,
                      const ModelParams& p, const BoxSpec& box) {
  return box_resolvent_block({x}, y, z, p, box)[0];
}

std::vector<StripEigen> strip_eigenvalues(const ModelParams& p, const StripSpec& strip) {
  p.validate();
  if (!p.alpha.rational || p.d1 != 1 || p.d2 != 1)
    throw BadConfig("strip oracle needs rational alpha and d1 = d2 = 1");
  const long q = strip.q;
  if (q != p.alpha.q) throw BadConfig("strip period must match alpha's denominator");

  const long nx = 2 * strip.L1 + 1;
  const long n = nx * q;
  auto idx = [&](long x1, long r) { return (x1 + strip.L1) * q + r; };

  // Per-bond Bloch phases e^{+-2 pi i k2} on the x2 hops, so eigenvalues are
  // the fiber dispersion at quasi-momentum k2 itself.
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
  const Complex ph = std::exp(Complex(0.0, 2.0 * pi * strip.k2));
  for (long x1 = -strip.L1; x1 <= strip.L1; ++x1) {
    for (long r = 0; r < q; ++r) {
      long i = idx(x1, r);
      if (x1 == 0) {
        XVec site{0, int(r + 1)};  // x2 = 1..q
        h(i, i) += potential_v(site.tail(1), p);
      }
      if (x1 + 1 <= strip.L1) h(i, idx(x1 + 1, r)) += -0.5;
      if (x1 - 1 >= -strip.L1) h(i, idx(x1 - 1, r)) += -0.5;
      long rp = (r + 1) % q, rm = (r - 1 + q) % q;
      h(i, idx(x1, rp)) += -0.5 * ph;
      h(i, idx(x1, rm)) += -0.5 * std::conj(ph);
    }
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  if (es.info() != Eigen::Success) throw SolveFailure("strip eigensolve failed");

  std::vector<StripEigen> out;
  out.reserve(n);
  for (long c = 0; c < n; ++c) {
    StripEigen se;
    se.value = es.eigenvalues()[c];
    double w = 0.0;
    for (long x1 = -2; x1 <= 2; ++x1)
      for (long r = 0; r < q; ++r) w += std::norm(es.eigenvectors()(idx(x1, r), c));
    se.surface_weight = w;
    se.outside_channels = true;
    for (long l = 0; l < q; ++l) {
      double c2 = std::cos(2.0 * pi * (strip.k2 + double(l) / q));
      if (se.value >= -1.0 - c2 && se.value <= 1.0 - c2) se.outside_channels = false;
    }
    se.surface_candidate = (se.surface_weight > 0.5) && se.outside_channels;
    out.push_back(se);
  }
  return out;
}

Complex quadrature_green(int nu, const XVec& x, Complex z, long n_min) {
  if (!(z.imag() > 0)) throw BadConfig("quadrature oracle needs Im z > 0");
  if (nu < 1 || nu > 2) throw BadConfig("quadrature oracle supports nu in {1,2}");

  long n = std::max<long>(n_min, long(std::ceil(64.0 / z.imag())));
  // round up to a power of two; cap the tensor grid at desk scale
  long npow = 1;
  while (npow < n) npow <<= 1;
  n = std::min(npow, nu == 1 ? (1L << 20) : (1L << 13));

  if (nu == 1) {
    Complex s{0.0, 0.0};
    for (long i = 0; i < n; ++i) {
      double k = (i + 0.5) / double(n);
      s += std::exp(Complex(0.0, 2.0 * pi * k * x.c[0])) /
           (-std::cos(2.0 * pi * k) - z);
    }
    return s / double(n);
  }
  Complex s{0.0, 0.0};
  for (long i = 0; i < n; ++i) {
    double k1 = (i + 0.5) / double(n);
    double e1 = -std::cos(2.0 * pi * k1);
    Complex ph1 = std::exp(Complex(0.0, 2.0 * pi * k1 * x.c[0]));
    Complex row{0.0, 0.0};
    for (long j = 0; j < n; ++j) {
      double k2 = (j + 0.5) / double(n);
      row += std::exp(Complex(0.0, 2.0 * pi * k2 * x.c[1])) /
             (e1 - std::cos(2.0 * pi * k2) - z);
    }
    s += ph1 * row;
  }
  return s / double(n) / double(n);
}

}  // namespace maryland
