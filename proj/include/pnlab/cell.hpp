// The cell problem
//
//   d_tau v = L + I1[v] - W'(v),   v(0, y) = p y,
//
// and the extraction of the unique lambda = Hbar(p, L) with v - py - lambda*tau
// bounded.  The computation evolves w = v - py, which is (1/|p|)-periodic
// (shifting y by 1/|p| moves py by one period of W), so the unbounded-domain
// problem becomes a periodic pseudospectral evolution.  Stepping is IMEX:
// the stiff diagonal multiplier of I1 implicit, W' explicit.
#pragma once

#include <optional>
#include <vector>

#include "pnlab/grid.hpp"
#include "pnlab/potential.hpp"
#include "pnlab/types.hpp"

namespace pnlab {

struct CellProblemConfig {
  Real p = 0.0;        // dislocation density, != 0
  Real L = 0.0;        // applied stress
  Grid1D grid;         // period must equal 1/|p|
  Real dt = 0.0;       // 0 = auto (0.1 * grid spacing)
  Real horizon = 0.0;  // T > 0
  Real burn_in = 0.2;  // fraction of the horizon discarded before fitting
  int mean_samples = 2000;    // drift samples recorded along the run
  int field_snapshots = 5;    // full w snapshots kept for diagnostics
  bool zero_potential = false;  // smoke-test mode: drop the W' term entirely
  Real initial_offset = 0.0;    // w(0, y) = offset, i.e. v(0, y) = p y + offset
};

CellProblemConfig make_cell_config(Real p, Real L, int count, Real dt, Real horizon,
                                   Real burn_in);

struct CellTrajectory {
  CellProblemConfig cfg;
  ArrayXr times;    // drift sample times
  ArrayXr mean_w;   // spatial mean of w at those times
  std::vector<Real> snapshot_times;
  std::vector<ArrayXr> snapshots;
  Real sup_w = 0.0;       // max over time of ||w||_inf
  bool cfl_warning = false;
};

// Evolve the cell problem over [0, horizon].  Throws ComputeError on blow-up
// (non-finite values), with the time of failure in the message.
CellTrajectory evolve_cell(const CellProblemConfig& cfg, const PotentialSpec& potential);

struct EffectiveHamiltonianEstimate {
  Real lambda = 0.0;
  Real slope_fit_stderr = 0.0;
  ArrayXr drift_times;    // post-burn-in samples used in the fit
  ArrayXr drift_means;
  bool converged = false; // last-half slope agrees with full-window slope within 2 se
};

// Least-squares slope of mean(w) against tau over the post-burn-in window.
// Requires at least 10 post-burn-in samples.
EffectiveHamiltonianEstimate estimate_lambda(const CellTrajectory& trajectory,
                                             Real burn_in);

struct OrowanRow {
  Real delta = 0.0, p = 0.0, L = 0.0;
  Real lambda = 0.0, lambda_over_delta2 = 0.0;
  Real target = 0.0;      // c0 |p0| L0
  Real rel_error = 0.0;
  bool converged = false;
  bool failed = false;
  std::string message;
};

struct OrowanScanConfig {
  Real p0 = 1.0, L0 = 1.0;
  std::vector<Real> deltas{0.2, 0.1, 0.05};
  int points_per_unit = 32;  // grid resolution per unit transition width
  Real dt = 0.0;             // 0 = auto
  Real horizon = 0.0;        // 0 = auto, max(150, 3/delta^2)
  Real burn_in = 0.2;
};

// For each delta runs the cell problem at (p, L) = (delta p0, delta L0) on a
// grid of period 1/(delta |p0|) and tabulates lambda / delta^2 against
// c0 |p0| L0.  Rows that fail are marked and the scan continues.
std::vector<OrowanRow> orowan_scan(const OrowanScanConfig& scan, Real c0,
                                   const PotentialSpec& potential);

// Resolution and horizon defaults used by the scan (exposed for tests).
int orowan_grid_count(Real delta, Real p0, int points_per_unit);
Real orowan_horizon(Real delta);

}  // namespace pnlab
