// Experiment configuration: flat "key = value" text (dotted section names),
// '#' comments, quoted or bare strings, comma lists of reals.  Unknown keys
// are hard errors; all module preconditions are checked up front so an
// invalid config never produces partial output.
#pragma once

#include <string>
#include <vector>

#include "pnlab/types.hpp"

namespace pnlab {

struct RunConfig {
  std::string potential = "standard";

  struct {
    Real r = 0.5;
    Real R = 1e4;
    int nodes_per_decade = 32;
  } levy;

  struct {
    Real X = 40.0;
    int count = 2048;
    Real tol = 1e-4;
  } layer;

  struct {
    Real L = 1.0;
    Real tol = 1e-4;
  } corrector;

  struct {
    Real delta = 0.1;
    Real p0 = 1.0;
    Real L = 1.0;
    Real tol = 1e-6;
    long n = 64;
    Real x_min = -0.5;
    Real x_max = 0.5;
    int x_count = 41;
  } hull;

  struct {
    Real p0 = 1.0;
    Real L0 = 1.0;
    std::vector<Real> deltas{0.2, 0.1, 0.05};
    Real delta = 0.0;  // single-run delta; 0 = first of deltas
    Real dt = 0.0;     // 0 = auto
    Real T = 0.0;      // 0 = auto
    Real burn_in = 0.2;
    int points_per_unit = 32;
  } cell;

  struct {
    int N = 32;
    Real spacing = 1.0;
    Real L0 = 1.0;
    Real c0 = 6.283185307179586;
    Real T = 1.0;
    Real dt = 1e-3;
    bool wrap = true;
    int images = 8;
  } particles;

  struct {
    std::string dir = "out";
    bool emit_plot_data = true;
  } output;
};

// Parse and fully validate.  Throws ConfigError with the line number on
// syntax errors and with the violated precondition on semantic ones.
RunConfig parse_config(const std::string& text);

// Apply one "key=value" override (CLI flags funnel through this).
void apply_override(RunConfig& cfg, const std::string& key, const std::string& value);

// Re-validate after overrides; throws ConfigError naming the precondition.
void validate_config(const RunConfig& cfg);

// Canonical serialization: every key, sorted, one per line.  Reruns of the
// same config serialize identically (this is what the manifest echoes and
// what cache keys hash).
std::string serialize_config(const RunConfig& cfg);

}  // namespace pnlab
