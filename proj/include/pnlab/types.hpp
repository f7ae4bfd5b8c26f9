// Common scalar and dense-array aliases used across the library.
#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace pnlab {

using Real = double;
using ArrayXr = Eigen::ArrayXd;
using VectorXr = Eigen::VectorXd;
using MatrixXr = Eigen::MatrixXd;

// Configuration / input errors (CLI exit status 2).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerical failures: non-convergence, blow-up, collisions (CLI exit status 1).
struct ComputeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace pnlab
