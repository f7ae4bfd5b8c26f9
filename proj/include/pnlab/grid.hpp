#pragma once

#include "pnlab/types.hpp"

namespace pnlab {

// Uniform periodic grid: nodes x_j = j * spacing, j = 0..count-1.
struct Grid1D {
  Real period = 0.0;
  int count = 0;

  Real spacing() const { return period / count; }
  Real node(int j) const { return spacing() * j; }
  ArrayXr nodes() const;
};

// Validates period > 0, count >= 4; throws ConfigError otherwise.
Grid1D make_grid(Real period, int count);

// Sampled function slope*x + (periodic interpolant of values).  The linear
// part is carried symbolically so operators can treat it exactly.
struct GridField {
  Grid1D grid;
  ArrayXr values;
  Real slope = 0.0;
};

GridField make_field(const Grid1D& grid, ArrayXr values, Real slope = 0.0);

}  // namespace pnlab
