#include "pnlab/potential.hpp"

#include <cmath>
#include <numbers>

namespace pnlab {

namespace {

constexpr Real kPi = std::numbers::pi_v<Real>;
constexpr Real kTwoPi = 2.0 * kPi;

// (1 - cos 2*pi*v) / (4*pi^2) and its derivative ladder.
Real standard_eval(Real v, int order) {
  switch (order) {
    case 0: return (1.0 - std::cos(kTwoPi * v)) / (4.0 * kPi * kPi);
    case 1: return std::sin(kTwoPi * v) / kTwoPi;
    case 2: return std::cos(kTwoPi * v);
    case 3: return -kTwoPi * std::sin(kTwoPi * v);
    case 4: return -kTwoPi * kTwoPi * std::cos(kTwoPi * v);
    default: throw ConfigError("potential: derivative order must be 0..4");
  }
}

Real perturbed_eval(Real v, int order) {
  constexpr Real beta = 0.3;
  const Real four_pi = 2.0 * kTwoPi;
  switch (order) {
    case 0:
      return standard_eval(v, 0) +
             beta * (1.0 - std::cos(four_pi * v)) / (16.0 * kPi * kPi);
    case 1: return standard_eval(v, 1) + beta * std::sin(four_pi * v) / four_pi;
    case 2: return standard_eval(v, 2) + beta * std::cos(four_pi * v);
    case 3: return standard_eval(v, 3) - beta * four_pi * std::sin(four_pi * v);
    case 4: return standard_eval(v, 4) - beta * four_pi * four_pi * std::cos(four_pi * v);
    default: throw ConfigError("potential: derivative order must be 0..4");
  }
}

}  // namespace

PotentialSpec make_standard_potential() {
  return PotentialSpec{standard_eval, 1.0, "standard"};
}

PotentialSpec make_perturbed_potential() {
  return PotentialSpec{perturbed_eval, 1.3, "perturbed"};
}

PotentialSpec make_potential(const std::string& label) {
  if (label == "standard") return make_standard_potential();
  if (label == "perturbed") return make_perturbed_potential();
  throw ConfigError("unknown potential label '" + label + "' (expected \"standard\" or \"perturbed\")");
}

PotentialValidation validate_potential(const PotentialSpec& spec, const ArrayXr& grid) {
  if (grid.size() == 0) throw ConfigError("validate_potential: empty grid");
  if (!grid.isFinite().all()) throw ConfigError("validate_potential: grid contains non-finite values");

  PotentialValidation report;
  constexpr Real kIntegerTol = 1e-12;
  for (Eigen::Index j = 0; j < grid.size(); ++j) {
    const Real v = grid[j];
    for (int k = 0; k <= 4; ++k) {
      report.periodicity_defect =
          std::max(report.periodicity_defect, std::abs(spec.eval(v + 1.0, k) - spec.eval(v, k)));
    }
    const Real w = spec.eval(v, 0);
    const Real dist = std::abs(v - std::round(v));
    if (dist < 1e-9) {
      if (std::abs(w) > kIntegerTol) report.positivity_violations.push_back(v);
    } else if (w <= 0.0) {
      report.positivity_violations.push_back(v);
    }
  }
  report.alpha_mismatch = std::abs(spec.eval(0.0, 2) - spec.alpha);
  report.ok = report.periodicity_defect <= 1e-12 && report.positivity_violations.empty() &&
              report.alpha_mismatch <= 1e-12 && spec.alpha > 0.0;
  return report;
}

}  // namespace pnlab
