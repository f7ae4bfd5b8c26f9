// The dislocation layer profile: the monotone transition phi solving
//
//   I1[phi] = W'(phi) on R,  phi' > 0,  phi(-inf) = 0, phi(+inf) = 1,
//   phi(0) = 1/2,
//
// solved by damped Newton on a truncated symmetric grid with the far field
// closed by the asymptotic tail H(x) - 1/(alpha pi x).  Also computes the
// mobility constant c0 = (int phi'^2)^{-1} and the fitted decay constants
// K0, K1 of the profile and its derivatives.
#pragma once

#include <memory>
#include <vector>

#include "pnlab/potential.hpp"
#include "pnlab/spline.hpp"
#include "pnlab/types.hpp"

namespace pnlab {

struct LayerSolution {
  ArrayXr xs;                      // nodes -X + j*h, j = 0..count-1, h = 2X/count
  ArrayXr phi, phi1, phi2, phi3;   // profile and derivatives at the nodes
  Real alpha = 0.0;
  Real half_width = 0.0;           // X
  Real c0 = 0.0;                   // (int phi'^2)^{-1}

  // Tail model beyond the stored domain:
  //   phi(z) ~ H(z) - 1/(alpha pi z) + d/z^2
  // with d fitted per side so the model matches the end node.
  Real tail_d_plus = 0.0, tail_d_minus = 0.0;

  // Fitted decay constants: K0 = min phi' (1+x^2) over all nodes,
  // K1 = max over the tail defect and all three derivative envelopes.
  Real K0 = 0.0, K1 = 0.0;

  Real residual_sup = 0.0;              // quadrature-route equation residual
  std::vector<Real> residual_history;   // Newton sup-residuals per iteration
  int newton_iterations = 0;

  PotentialSpec potential;

  // Interpolants (value and derivatives each get their own spline).
  CubicSpline s_phi, s_phi1, s_phi2, s_phi3;

  Real spacing() const { return xs[1] - xs[0]; }
};

// Evaluate phi (order 0) or one of its first three derivatives anywhere on R,
// using the splines inside the stored domain and the tail model outside.
Real layer_eval(const LayerSolution& layer, Real z, int order);

// Solve the layer equation.  Preconditions: X >= 20, count >= 512 (even),
// tol > 0.  The translation degeneracy is pinned by phi(0) = 1/2.  Throws
// ComputeError on non-convergence (with the residual history in the message)
// or if monotonicity is lost and damping cannot restore it.
LayerSolution solve_layer(const PotentialSpec& potential, Real half_width,
                          int count, Real tol);

// c0 = (int phi'^2)^{-1}: trapezoid over the stored domain plus the analytic
// tail of the model phi' ~ 1/(alpha pi x^2).  Throws ComputeError if the
// integral underflows.
Real c0_constant(const LayerSolution& layer);

struct LayerDecayReport {
  Real K0 = 0.0;           // largest K0 with phi' >= K0/(1+x^2) everywhere
  Real K1 = 0.0;           // smallest K1 covering all four bounds
  Real K1_tail = 0.0;      // |phi - H + 1/(alpha pi x)| x^2, |x| >= 1
  Real K1_d1 = 0.0, K1_d2 = 0.0, K1_d3 = 0.0;
  std::vector<Real> violations;  // nodes where phi' <= 0 (K0 > 0 impossible)
  bool ok = false;
};

LayerDecayReport verify_layer_decay(const LayerSolution& layer);

}  // namespace pnlab
