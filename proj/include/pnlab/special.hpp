// Small special-function kernels backing the lattice reference sums:
// digamma/trigamma (recurrence + asymptotic series) and the closed forms of
// the centered harmonic sums
//
//   S1(g) = lim_n sum_{0<|i|<=n} 1/(g - i) = -2g sum_{i>=1} 1/(i^2 - g^2)
//   S2(g) = sum_{i>=1} 1/(i + g)^2,   S3(g) = sum_{i>=1} 1/(i - g)^2
//
// for g in (-1/2, 1/2].  Everything here is elementary and cross-checked in
// the tests against brute-force summation with integral tail bounds.
#pragma once

#include "pnlab/types.hpp"

namespace pnlab {

// psi(z) for z > 0.
Real digamma(Real z);

// psi'(z) = sum_{k>=0} 1/(z+k)^2 for z > 0.
Real trigamma(Real z);

// Closed forms of the three centered lattice sums. S1 uses
// pi*cot(pi*g) - 1/g with a series branch near g = 0 to avoid cancellation.
Real lattice_sum_s1(Real gamma);
Real lattice_sum_s2(Real gamma);
Real lattice_sum_s3(Real gamma);

// Partial sums of the same series, O(1) via digamma/trigamma differences:
//   sum_{i=1}^{m} 1/(i + g)   and   sum_{i=1}^{m} 1/(i + g)^2.
Real harmonic_partial(long m, Real g);
Real harmonic2_partial(long m, Real g);

// sum_{i=m+1}^{inf} 1/(i + g)^p for p = 2 or 3, by direct terms plus a
// midpoint-rule integral tail (error O(m^-4) at the switch point).
Real power_tail(long m, Real g, int p);

}  // namespace pnlab
