// The stress corrector psi: the decaying solution of the linear problem
//
//   I1[psi] = W''(phi) psi + (L/alpha) (W''(phi) - W''(0)) + c phi',
//   psi(+-inf) = 0,   c = L / int phi'^2 = L * c0,
//
// solved by dense collocation on the layer grid with homogeneous Dirichlet
// closure beyond [-X, X].  The operator I1 - W''(phi) has the kernel
// direction phi' (differentiate the layer equation), so the system is
// regularized by appending <psi, phi'> = 0 as a least-squares row; that
// gauge choice is reported alongside the solution.
#pragma once

#include <vector>

#include "pnlab/layer.hpp"
#include "pnlab/types.hpp"

namespace pnlab {

struct CorrectorSolution {
  ArrayXr xs;
  ArrayXr psi, psi1, psi2;
  Real c = 0.0;        // velocity, = L * c0 of the companion layer
  Real L = 0.0;        // applied stress parameter
  Real K2 = 0.0;       // fitted 1/x tail coefficient (signed)
  Real K3 = 0.0;       // fitted second-order envelope, >= 0
  Real tail_e_plus = 0.0, tail_e_minus = 0.0;  // matched 1/z^2 correction per side

  Real residual_sup = 0.0;       // ||A psi - g||_inf of the collocation system
  Real fredholm_defect = 0.0;    // |<g, phi'>| / (||g|| ||phi'||), tail-corrected
  Real condition_estimate = 0.0; // |R_00 / R_nn| from the pivoted QR

  CubicSpline s_psi, s_psi1, s_psi2;
};

// Evaluate psi / psi' / psi'' anywhere, tails K2/z + e/z^2 outside the grid.
Real corrector_eval(const CorrectorSolution& sol, Real z, int order);

// Solve the corrector problem on the layer's grid.  Throws ComputeError if
// the regularized system is rank-deficient or the residual exceeds tol.
CorrectorSolution solve_corrector(const LayerSolution& layer,
                                  const PotentialSpec& potential, Real L, Real tol);

struct CorrectorDecayReport {
  Real K2 = 0.0;
  Real K3 = 0.0;
  Real K3_tail = 0.0, K3_d1 = 0.0, K3_d2 = 0.0;
  bool ok = false;
};

// Fits K2 on a mid-range window (least squares of x*psi against 1/x) and the
// minimal K3 covering the tail defect and both derivative envelopes.
CorrectorDecayReport verify_corrector_decay(const CorrectorSolution& sol);

}  // namespace pnlab
