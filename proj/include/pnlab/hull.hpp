// The hull-function ansatz: the superposition of shifted layers and
// correctors
//
//   s_n(x) = delta*L/alpha + sum_{i=-n}^{n} [ phi(x_i) + delta psi(x_i) ] - n,
//   x_i = (x - i) / (delta |p0|),
//
// its limit h(x) = lim_n s_n(x), derivatives, the nonlocal operator value
// I1[h], and the residual
//
//   NL(x) = lambda_bar h'(x) - delta L - delta |p0| I1[h](x) + W'(h(x)),
//   lambda_bar = delta^2 c0 |p0| L.
//
// Writing x = i0 + gamma with gamma in (-1/2, 1/2], the slowly convergent
// parts of the sums are the centered harmonic series
//
//   sum_{i != i0} 1/(x-i) -> -2 gamma sum_{i>=1} 1/(i^2 - gamma^2),
//   sum_{i<i0} 1/(x-i)^2 -> sum 1/(i+gamma)^2,
//   sum_{i>i0} 1/(x-i)^2 -> sum 1/(i-gamma)^2,
//
// and the limit evaluation replaces the truncated tails of those series by
// their analytic limits, with the layer/corrector far fields supplying the
// per-term coefficients.
#pragma once

#include <memory>

#include "pnlab/corrector.hpp"
#include "pnlab/fractional.hpp"
#include "pnlab/layer.hpp"
#include "pnlab/types.hpp"

namespace pnlab {

struct HullParams {
  Real delta = 0.0;
  Real p0 = 0.0;   // != 0
  Real L = 0.0;
  long n = 64;     // starting truncation for limit evaluation
  std::shared_ptr<const LayerSolution> layer;
  std::shared_ptr<const CorrectorSolution> corrector;

  Real lattice_scale() const { return delta * std::abs(p0); }  // delta |p0|
};

// Validates delta > 0, p0 != 0, n >= 1, corrector solved at the same L, and
// the standing smallness requirement 1/(delta |p0|) >= 2.
HullParams make_hull_params(Real delta, Real p0, Real L, long n,
                            std::shared_ptr<const LayerSolution> layer,
                            std::shared_ptr<const CorrectorSolution> corrector);

struct HullEvaluation {
  Real x = 0.0;
  Real gamma = 0.0;      // x - i0, in (-1/2, 1/2]
  long i0 = 0;           // nearest lattice index
  Real h = 0.0;
  Real h1 = 0.0, h2 = 0.0;
  Real i1 = 0.0;         // I1[h](x)
  Real nl = 0.0;         // NL residual at lambda_bar
  Real lambda_bar = 0.0; // delta^2 c0 |p0| L
  long n_used = 0;
};

// Decompose x = i0 + gamma, gamma in (-1/2, 1/2].
void lattice_decompose(Real x, long& i0, Real& gamma);

// Finite partial sum s_n (order 0) or its first/second derivative, summed
// term by term through the layer/corrector evaluators.
Real ansatz_partial_sum(const HullParams& params, Real x, int order);

// Tail-accelerated evaluation of h / h' / h'' at fixed truncation n.
Real hull_series_value(const HullParams& params, Real x, int order, long n);

// Full evaluation: grows n geometrically until successive accelerated values
// move by less than tol, then fills I1[h] via the linear-growth quadrature
// and the NL residual.  Throws ComputeError if n exceeds n_max without
// converging.
HullEvaluation hull_value(const HullParams& params, Real x, Real tol);

// NL residual alone (evaluates hull_value internally).
Real nl_residual(const HullParams& params, Real x);

// Mean of h(t) - t over one lattice period (enters the far-tail closure of
// the I1 quadrature).
Real hull_mean_offset(const HullParams& params);

struct LatticeReferenceSums {
  Real s1_partial = 0.0, s2_partial = 0.0, s3_partial = 0.0;
  Real s1_limit = 0.0, s2_limit = 0.0, s3_limit = 0.0;
};

// Partial sums at truncation n of the three centered series together with
// their limits computed by high-n brute force plus an integral tail bound
// (independent of the closed forms in special.hpp, which the tests compare
// against).  gamma = 1/2 is included, -1/2 excluded.
LatticeReferenceSums lattice_reference_sums(Real gamma, long n);

// int_{|y| >= a} [ s_n(x+y) - s_n(x) ] mu(dy), split at n-1-|i0| and
// n+1+|i0| where the partial sum turns from hull-like into its flat tails.
// Requires a >= 1 and n > |i0| + 1 + a.
Real far_field_contribution(const HullParams& params, Real x, Real a, long n);

}  // namespace pnlab
