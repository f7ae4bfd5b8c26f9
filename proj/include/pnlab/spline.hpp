// Clamped C^2 cubic spline on a uniform grid.  Used to evaluate solved
// profiles between nodes; the end slopes are supplied from the far-field
// models so the interpolant meets the tails smoothly.
#pragma once

#include "pnlab/types.hpp"

namespace pnlab {

class CubicSpline {
 public:
  CubicSpline() = default;
  // y are samples at x0 + j*h, j = 0..n-1; d0/d1 are the end derivatives.
  CubicSpline(Real x0, Real h, const ArrayXr& y, Real d_left, Real d_right);

  Real operator()(Real x) const;
  Real x_min() const { return x0_; }
  Real x_max() const { return x0_ + h_ * (n_ - 1); }

 private:
  Real x0_ = 0.0, h_ = 1.0;
  Eigen::Index n_ = 0;
  ArrayXr y_, m_;  // values and node second derivatives
};

}  // namespace pnlab
