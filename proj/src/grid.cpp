#include "pnlab/grid.hpp"

namespace pnlab {

ArrayXr Grid1D::nodes() const {
  return ArrayXr::LinSpaced(count, 0.0, spacing() * (count - 1));
}

Grid1D make_grid(Real period, int count) {
  if (!(period > 0.0)) throw ConfigError("Grid1D: period must be positive");
  if (count < 4) throw ConfigError("Grid1D: count must be >= 4");
  return Grid1D{period, count};
}

GridField make_field(const Grid1D& grid, ArrayXr values, Real slope) {
  if (values.size() != grid.count)
    throw ConfigError("GridField: values length must equal grid count");
  if (!values.isFinite().all() || !std::isfinite(slope))
    throw ConfigError("GridField: non-finite values");
  return GridField{grid, std::move(values), slope};
}

}  // namespace pnlab
