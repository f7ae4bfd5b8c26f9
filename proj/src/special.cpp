#include "pnlab/special.hpp"

#include <cmath>
#include <numbers>

namespace pnlab {

namespace {

constexpr Real kPi = std::numbers::pi_v<Real>;

// zeta(2k) for k = 1..8; feeds the small-argument series of lattice_sum_s1.
constexpr Real kZetaEven[] = {
    1.6449340668482264,   // zeta(2)
    1.0823232337111382,   // zeta(4)
    1.0173430619844491,   // zeta(6)
    1.0040773561979443,   // zeta(8)
    1.0009945751278181,   // zeta(10)
    1.0002460865533080,   // zeta(12)
    1.0000612481350587,   // zeta(14)
    1.0000152822594087,   // zeta(16)
};

}  // namespace

Real digamma(Real z) {
  Real acc = 0.0;
  while (z < 10.0) {
    acc -= 1.0 / z;
    z += 1.0;
  }
  const Real inv = 1.0 / z, inv2 = inv * inv;
  // ln z - 1/(2z) - sum B_2n / (2n z^2n)
  Real s = std::log(z) - 0.5 * inv;
  s -= inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 -
       inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0)))));
  return acc + s;
}

Real trigamma(Real z) {
  Real acc = 0.0;
  while (z < 10.0) {
    acc += 1.0 / (z * z);
    z += 1.0;
  }
  const Real inv = 1.0 / z, inv2 = inv * inv;
  Real s = inv + 0.5 * inv2;
  s += inv * inv2 * (1.0 / 6.0 - inv2 * (1.0 / 30.0 - inv2 * (1.0 / 42.0 -
       inv2 * (1.0 / 30.0 - inv2 * (5.0 / 66.0)))));
  return acc + s;
}

Real lattice_sum_s1(Real gamma) {
  if (gamma == 0.0) return 0.0;
  if (std::abs(gamma) < 0.1) {
    // pi cot(pi g) - 1/g = -2 sum_k zeta(2k) g^(2k-1), no cancellation.
    const Real g2 = gamma * gamma;
    Real s = 0.0, p = gamma;
    for (Real zk : kZetaEven) {
      s += zk * p;
      p *= g2;
    }
    return -2.0 * s;
  }
  return kPi * std::cos(kPi * gamma) / std::sin(kPi * gamma) - 1.0 / gamma;
}

Real lattice_sum_s2(Real gamma) { return trigamma(1.0 + gamma); }

Real lattice_sum_s3(Real gamma) { return trigamma(1.0 - gamma); }

Real harmonic_partial(long m, Real g) {
  if (m <= 0) return 0.0;
  return digamma(static_cast<Real>(m) + 1.0 + g) - digamma(1.0 + g);
}

Real harmonic2_partial(long m, Real g) {
  if (m <= 0) return 0.0;
  return trigamma(1.0 + g) - trigamma(static_cast<Real>(m) + 1.0 + g);
}

Real power_tail(long m, Real g, int p) {
  // sum_{i=m+1}^inf (i+g)^-p: 40 direct terms, then midpoint Euler-Maclaurin.
  constexpr long kDirect = 40;
  Real s = 0.0;
  long i = m + 1;
  for (long kept = 0; kept < kDirect; ++kept, ++i) s += std::pow(i + g, -p);
  // sum_{i>M} f(i) = int_{M+1/2} f + f'(M+1/2)/24 - 7 f'''(M+1/2)/5760 + ...
  const Real M = static_cast<Real>(i) - 0.5 + g;
  const Real Minv = 1.0 / M;
  Real tail = std::pow(M, 1 - p) / (p - 1);
  tail -= (p / 24.0) * std::pow(M, -p - 1);
  tail += (7.0 / 5760.0) * p * (p + 1) * (p + 2) * std::pow(Minv, p + 3);
  return s + tail;
}

}  // namespace pnlab
