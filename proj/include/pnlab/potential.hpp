// Misfit potentials W: 1-periodic, vanishing on the integers, positive
// elsewhere, with alpha = W''(0) > 0.  A PotentialSpec bundles W and its
// first four derivatives behind one evaluator; instances are immutable and
// safe to share across threads.
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pnlab/types.hpp"

namespace pnlab {

struct PotentialSpec {
  // eval(v, k) = W^(k)(v) for k = 0..4.
  std::function<Real(Real, int)> eval;
  Real alpha = 0.0;  // W''(0)
  std::string name;
};

// W(v) = (1 - cos 2*pi*v) / (4*pi^2): alpha = 1, and the layer profile has
// the closed form 1/2 + atan(x)/pi, which anchors most analytic oracles.
PotentialSpec make_standard_potential();

// W(v) = (1 - cos 2*pi*v)/(4*pi^2) + beta (1 - cos 4*pi*v)/(16*pi^2),
// beta = 0.3: alpha = 1.3.  Same admissibility class, no closed-form layer;
// exercises the genuinely iterative solver paths.
PotentialSpec make_perturbed_potential();

// Look up a potential by config label ("standard" | "perturbed").
PotentialSpec make_potential(const std::string& label);

struct PotentialValidation {
  Real periodicity_defect = 0.0;    // max over grid, k=0..4 of |W^(k)(v+1)-W^(k)(v)|
  Real alpha_mismatch = 0.0;        // |eval(0,2) - alpha|
  std::vector<Real> positivity_violations;  // grid points where the sign conditions fail
  bool ok = false;
};

// Checks periodicity, W = 0 on integers / W > 0 off them, and alpha
// consistency on the given sample grid.  Throws ConfigError on an empty or
// non-finite grid.
PotentialValidation validate_potential(const PotentialSpec& spec, const ArrayXr& grid);

}  // namespace pnlab
