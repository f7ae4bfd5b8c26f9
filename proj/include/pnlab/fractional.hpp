// The order-1 Levy operator I1 = -(-Laplace)^{1/2},
//
//   I1[U](x) = int_{|z|<=r} (U(x+z) - U(x) - U'(x) z) mu(dz)
//            + int_{|z|>r}  (U(x+z) - U(x))           mu(dz),
//   mu(dz) = dz / (pi z^2),
//
// realized two independent ways: a spectral multiplier -|k| on periodic
// grids, and a graded singular-integral quadrature on arbitrary evaluators.
// The quadrature always works on symmetric node pairs +-z, so the odd part
// of the measure cancels exactly in floating point; in particular the value
// is independent of the split radius r, and functions with linear growth
// (U - slope*x bounded) are handled by the same path with the linear part
// cancelling pairwise.
#pragma once

#include <functional>

#include "pnlab/grid.hpp"
#include "pnlab/types.hpp"

namespace pnlab {

struct LevyQuadratureConfig {
  Real r = 0.5;              // compensated/uncompensated split radius, 0 < r < 1
  Real R = 1e4;              // outer truncation; tail error ~ 2*osc(U)/(pi*R)
  int nodes_per_decade = 32; // Gauss-Legendre nodes per log-decade

  // Optional resolved window [uniform_from, uniform_to], composite GL8 on
  // segments of length uniform_step, for integrands that keep oscillating
  // with period osc_period out to large |z| (lattice superpositions do).
  // Log-graded nodes undersample such tails; the window resolves them and
  // the stretch [uniform_to, R] is closed with the windowed oscillation
  // mean.  Disabled when uniform_step <= 0.
  Real uniform_from = 1.0;
  Real uniform_to = 0.0;
  Real uniform_step = 0.0;
  Real osc_period = 1.0;
};

// Throws ConfigError if r, R or the node count violate the constraints.
void validate_levy_config(const LevyQuadratureConfig& cfg);

// Spectral route: multiplier -|2 pi m / period| on the DFT modes of the
// periodic part; the linear part contributes zero and is dropped.
GridField half_laplacian_spectral(const GridField& field);

// Same multiplier applied in-place to raw samples (no GridField wrapper).
ArrayXr half_laplacian_spectral(const ArrayXr& values, Real period);

// Quadrature route for bounded C^2 evaluators.  fprime_at_x enters the
// compensated inner integrand; with the symmetric pairing it cancels
// term by term.
Real half_laplacian_quadrature(const std::function<Real(Real)>& f, Real fprime_at_x,
                               Real x, const LevyQuadratureConfig& cfg);

// Evaluators with an exact linear part: f - slope*x bounded.  Implemented as
// the symmetric principal value lim_{r->0} int_{r<|z|<1/r}, which the pairing
// realizes without subtracting the slope.
Real half_laplacian_linear_growth(const std::function<Real(Real)>& f, Real slope,
                                  Real x, const LevyQuadratureConfig& cfg);

// Variant taking the second derivative at x: the inner core [0, z_taylor] is
// closed analytically as z_taylor * f''(x) / pi, which avoids evaluating the
// pair difference where it is below roundoff.  Used by the hull residual.
Real half_laplacian_linear_growth(const std::function<Real(Real)>& f, Real slope,
                                  Real x, Real fsecond_at_x, Real z_taylor,
                                  const LevyQuadratureConfig& cfg);

// First column of the periodized spectral operator (a circulant): entry m is
// the discrete convolution kernel of I1 at lag m on an N-node grid of the
// given period.
ArrayXr spectral_kernel_column(int count, Real period);

// Generic 1-D quadratures shared across the solvers: composite GL8 in the
// log variable (a > 0) and composite GL8 on uniform segments.
Real integrate_log_graded(const std::function<Real(Real)>& g, Real a, Real b,
                          int nodes_per_decade);
Real integrate_uniform_gl8(const std::function<Real(Real)>& g, Real a, Real b,
                           Real segment_length);

// Spectral derivative of uniform samples after subtracting a cubic Hermite
// bridge, so the implied periodization is C^1 and free of end ringing.
ArrayXr spectral_derivative_bridged(const ArrayXr& u, Real h, int order);

// Dense collocation matrix of I1 acting on samples supported on a uniform
// n-node grid with spacing h, evaluated at the same nodes, with the function
// extended by zero outside.  Built as the interior block of the spectral
// circulant on a grid zero-padded by pad_factor; symmetric Toeplitz.
MatrixXr half_laplacian_dense_matrix(int n, Real h, int pad_factor = 2);

}  // namespace pnlab
