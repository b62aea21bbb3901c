#include "maryland/model.hpp"

#include <cmath>
#include <numeric>

namespace maryland {

Alpha Alpha::make_rational(long p, long q) {
  if (q <= 0) throw BadConfig("rational alpha needs q > 0");
  long pm = ((p % q) + q) % q;
  long g = std::gcd(pm == 0 ? q : pm, q);
  Alpha a;
  a.rational = true;
  a.p = pm / g;
  a.q = (pm == 0) ? 1 : q / g;
  if (pm == 0) a.p = 0;
  a.value = KVec::scalar(double(a.p) / double(a.q));
  return a;
}

Alpha Alpha::make_irrational(const KVec& v) {
  Alpha a;
  a.rational = false;
  a.value = v;
  for (int i = 0; i < v.n; ++i) a.value.c[i] = mod1(v.c[i]);
  return a;
}

void ModelParams::validate() const {
  if (d1 < 1 || d2 < 1 || d1 + d2 > 4) throw BadConfig("need d1,d2 >= 1 and d1+d2 <= 4");
  if (!(g > 0)) throw BadConfig("need g > 0");
  if (!(omega >= 0.0 && omega < 1.0)) throw BadConfig("need omega in [0,1)");
  if (alpha.dim() != d2) throw BadConfig("alpha dimension must equal d2");
  if (alpha.rational && d2 != 1) throw BadConfig("rational alpha supported for d2 = 1 only");
  if (alpha.rational) {
    // Reject omega on (or within 1e-9 of) the tan pole set {1/2 - p x2/q mod 1}.
    for (long j = 0; j < alpha.q; ++j) {
      double phase = double(j) / double(alpha.q) + omega - 0.5;
      if (dist_to_integer(phase) < 1e-9)
        throw SingularPotential("omega hits a tan pole of the periodic potential");
    }
  }
}

KVec ModelParams::shift_k2(const KVec& k2, long l) const {
  KVec r = k2;
  for (int i = 0; i < d2; ++i) r.c[i] = mod1(k2.c[i] + double(l) * alpha.value.c[i]);
  return r;
}

double potential_v(const XVec& x2, const ModelParams& p) {
  double theta = p.omega;
  for (int i = 0; i < p.d2; ++i) theta += p.alpha.value.c[i] * x2.c[i];
  theta = mod1(theta);
  if (std::abs(theta - 0.5) < 1e-9)
    throw SingularPotential("alpha . x2 + omega within 1e-9 of 1/2 mod 1");
  return p.g * std::tan(pi * theta);
}

double energy_symbol(const KVec& k, int nu) {
  double s = 0.0;
  for (int i = 0; i < nu; ++i) s -= std::cos(2.0 * pi * k.c[i]);
  return s;
}

}  // namespace maryland
