#include "maryland/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace maryland {

namespace {

ComplexEnergy channel_energy(const KVec& k2, ComplexEnergy z, const ModelParams& p) {
  return z.shifted(-energy_symbol(k2, p.d2));
}

}  // namespace

GreenValue gamma0_hat(const KVec& k2, ComplexEnergy z, const ModelParams& p) {
  ComplexEnergy zs = channel_energy(k2, z, p);
  if (p.d1 == 1) return green_1d(0, zs);
  XVec origin;
  origin.n = p.d1;
  return green_nd(p.d1, origin, zs, 1e-10);
}

Complex b_hat(const KVec& k2, ComplexEnergy z, const ModelParams& p) {
  Complex w = p.g * gamma0_hat(k2, z, p).value;
  return (w - Complex(0.0, 1.0)) / (w + Complex(0.0, 1.0));
}

Complex inv_gamma_denom(const KVec& k2, ComplexEnergy z, const ModelParams& p) {
  Complex w = p.g * gamma0_hat(k2, z, p).value;
  return 1.0 / (w + Complex(0.0, 1.0));
}

bool k_gamma_membership(const KVec& k2, double E, double gamma, const ModelParams& p) {
  if (!(gamma > 0.0 && gamma < p.d1)) throw BadConfig("need 0 < gamma < d1");
  double lam = E - energy_symbol(k2, p.d2);
  return lam >= -p.d1 + gamma && lam <= p.d1 - gamma;
}

std::vector<double> channel_edges_1d(double E) {
  std::vector<double> edges;
  for (double c : {1.0 - E, -1.0 - E}) {
    if (c > -1.0 + 1e-13 && c < 1.0 - 1e-13) {
      double k = std::acos(c) / (2.0 * pi);
      edges.push_back(k);
      edges.push_back(1.0 - k);
    } else if (std::abs(c + 1.0) <= 1e-13) {
      edges.push_back(0.5);
    }
    // c = +1 sits at k = 0 = 1, the torus seam
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

double k_gamma_measure_1d(double E, double gamma, const ModelParams& p) {
  if (p.d2 != 1) throw BadConfig("analytic measure implemented for d2 = 1");
  // cos(2 pi k2) in [E - d1 + gamma, E + d1 - gamma] intersected with [-1,1].
  double lo = std::max(-1.0, E - p.d1 + gamma);
  double hi = std::min(1.0, E + p.d1 - gamma);
  if (lo > hi) return 0.0;
  return (std::acos(lo) - std::acos(hi)) / pi;
}

Complex partial_product(long m, const KVec& k2, ComplexEnergy z, const ModelParams& p) {
  if (m < 1) throw BadConfig("partial_product needs m >= 1");
  Complex prod{1.0, 0.0};
  for (long l = 1; l <= m; ++l) prod *= b_hat(p.shift_k2(k2, l), z, p);
  return std::pow(p.sigma(), double(m)) * prod;
}

Complex t_coefficient_series(long m, const KVec& k2, ComplexEnergy z, const ModelParams& p) {
  if (m < 0) throw BadConfig("t coefficient needs m >= 0");
  Complex a0 = inv_gamma_denom(k2, z, p);
  if (m == 0) return -p.g * a0;
  Complex prod{1.0, 0.0};
  for (long l = 1; l < m; ++l) prod *= b_hat(p.shift_k2(k2, l), z, p);
  Complex am = inv_gamma_denom(p.shift_k2(k2, m), z, p);
  return Complex(0.0, 2.0 * p.g) * std::pow(p.sigma(), double(m)) * a0 * am * prod;
}

Complex t_coefficient_resummed(long m, const KVec& k2, ComplexEnergy z, const ModelParams& p) {
  if (!p.alpha.rational) throw BadConfig("resummed coefficients need rational alpha");
  const long q = p.alpha.q;
  if (m < 0 || m > q) throw BadConfig("resummed coefficient needs 0 <= m <= q");
  if (m == 0) return t_coefficient_series(0, k2, z, p);
  Complex denom = 1.0 - partial_product(q, k2, z, p);
  if (std::abs(denom) < 1e-8)
    throw NearPole("1 - P_q vanishes: spectral parameter on a band");
  return t_coefficient_series(m, k2, z, p) / denom;
}

Complex t_coefficient(long m, const KVec& k2, ComplexEnergy z, const ModelParams& p) {
  return p.alpha.rational ? t_coefficient_resummed(m, k2, z, p)
                          : t_coefficient_series(m, k2, z, p);
}

Complex dgamma0_dE(const KVec& k2, ComplexEnergy z, const ModelParams& p) {
  if (p.d1 != 1) throw BadConfig("dgamma0_dE implemented for d1 = 1");
  ComplexEnergy zs = channel_energy(k2, z, p);
  Complex root = sqrt_z2m1_at(zs);
  Complex lam = zs.on_axis() ? Complex(zs.re, 0.0) : zs.value();
  return lam / (root * root * root);
}

Complex db_hat_dE(const KVec& k2, ComplexEnergy z, const ModelParams& p) {
  Complex w = p.g * gamma0_hat(k2, z, p).value;
  Complex d = w + Complex(0.0, 1.0);
  return Complex(0.0, 2.0) * p.g * dgamma0_dE(k2, z, p) / (d * d);
}

Complex dPq_dE(const KVec& k2, ComplexEnergy z, const ModelParams& p) {
  if (!p.alpha.rational) throw BadConfig("dPq_dE needs rational alpha");
  const long q = p.alpha.q;
  Complex pq = partial_product(q, k2, z, p);
  Complex s{0.0, 0.0};
  for (long l = 1; l <= q; ++l) {
    KVec kl = p.shift_k2(k2, l);
    s += db_hat_dE(kl, z, p) / b_hat(kl, z, p);
  }
  return pq * s;
}

Complex dPq_dk(const KVec& k2, ComplexEnergy z, const ModelParams& p) {
  if (!p.alpha.rational || p.d2 != 1) throw BadConfig("dPq_dk needs rational alpha, d2 = 1");
  const long q = p.alpha.q;
  Complex pq = partial_product(q, k2, z, p);
  Complex s{0.0, 0.0};
  for (long l = 1; l <= q; ++l) {
    KVec kl = p.shift_k2(k2, l);
    Complex w = p.g * gamma0_hat(kl, z, p).value;
    Complex d = w + Complex(0.0, 1.0);
    // d(b_hat)/dk = 2i g gamma0' * dlambda/dk / (g gamma0 + i)^2,
    // lambda = z + cos(2 pi k).
    double dlam = -2.0 * pi * std::sin(2.0 * pi * kl.c[0]);
    Complex db = Complex(0.0, 2.0) * p.g * dgamma0_dE(kl, z, p) * dlam / (d * d);
    s += db / b_hat(kl, z, p);
  }
  return pq * s;
}

ContractionEstimate contraction_rate(ComplexEnergy z, const ModelParams& p,
                                     double gamma, int grid) {
  ContractionEstimate est;
  if (p.d1 > 1) grid = std::max(32, grid / 32);  // Bessel route per point
  if (p.d2 != 1) {
    // 2-d torus grid; off-axis usage only.
    double rho = 0.0;
    int n = std::max(16, grid / 16);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        KVec k{(i + 0.5) / n, (j + 0.5) / n};
        rho = std::max(rho, std::abs(b_hat(k, z, p)));
      }
    est.rho = rho;
    return est;
  }
  if (!z.on_axis()) {
    double rho = 0.0;
    for (int i = 0; i < grid; ++i) {
      KVec k{(i + 0.5) / grid};
      rho = std::max(rho, std::abs(b_hat(k, z, p)));
    }
    est.rho = rho;
    return est;
  }
  // On axis: contraction only on K_gamma(E); rate per step from the visit
  // frequency |K_gamma| and the strict bound 1 - delta there.
  double bmax = 0.0;
  long in = 0;
  for (int i = 0; i < grid; ++i) {
    KVec k{(i + 0.5) / grid};
    if (!k_gamma_membership(k, z.re, gamma, p)) continue;
    ++in;
    bmax = std::max(bmax, std::abs(b_hat(k, z, p)));
  }
  est.measure = double(in) / grid;
  est.delta = 1.0 - bmax;
  if (in == 0 || est.delta <= 0.0) {
    est.rho = 1.0;
    return est;
  }
  est.rho = std::pow(1.0 - est.delta, 0.5 * est.measure);
  return est;
}

}  // namespace maryland
