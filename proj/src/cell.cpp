#include "pnlab/cell.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <numbers>
#include <sstream>

namespace pnlab {

namespace {

constexpr Real kPi = std::numbers::pi_v<Real>;

int next_pow2(int v) {
  int p = 4;
  while (p < v) p *= 2;
  return p;
}

struct LinearFit {
  Real slope = 0.0, intercept = 0.0, stderr_slope = 0.0;
};

LinearFit fit_line(const ArrayXr& t, const ArrayXr& y) {
  const auto n = t.size();
  const Real tm = t.mean(), ym = y.mean();
  const Real sxx = ((t - tm) * (t - tm)).sum();
  const Real sxy = ((t - tm) * (y - ym)).sum();
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = ym - fit.slope * tm;
  if (n > 2) {
    const ArrayXr r = y - (fit.intercept + fit.slope * t);
    fit.stderr_slope = std::sqrt((r * r).sum() / ((n - 2) * sxx));
  }
  return fit;
}

// Drift residuals are dominated by the decaying start-up transient, not by
// independent noise, so the OLS standard error is far too optimistic.  Use
// the spread of per-block slopes instead.
Real block_slope_stderr(const ArrayXr& t, const ArrayXr& y, int blocks) {
  const auto n = t.size();
  blocks = std::min<int>(blocks, static_cast<int>(n / 4));
  if (blocks < 2) return 0.0;
  std::vector<Real> slopes;
  for (int b = 0; b < blocks; ++b) {
    const Eigen::Index lo = n * b / blocks, hi = n * (b + 1) / blocks;
    if (hi - lo < 3) continue;
    slopes.push_back(fit_line(t.segment(lo, hi - lo), y.segment(lo, hi - lo)).slope);
  }
  if (slopes.size() < 2) return 0.0;
  Real mean = 0.0;
  for (Real s : slopes) mean += s;
  mean /= slopes.size();
  Real var = 0.0;
  for (Real s : slopes) var += (s - mean) * (s - mean);
  var /= (slopes.size() - 1);
  return std::sqrt(var / slopes.size());
}

}  // namespace

CellProblemConfig make_cell_config(Real p, Real L, int count, Real dt, Real horizon,
                                   Real burn_in) {
  if (p == 0.0) throw ConfigError("cell: p must be nonzero");
  if (!(horizon > 0.0)) throw ConfigError("cell: horizon must be positive");
  if (!(burn_in >= 0.0) || !(burn_in < 1.0))
    throw ConfigError("cell: burn_in fraction must lie in [0, 1)");
  CellProblemConfig cfg;
  cfg.p = p;
  cfg.L = L;
  cfg.grid = make_grid(1.0 / std::abs(p), count);
  cfg.dt = dt;
  cfg.horizon = horizon;
  cfg.burn_in = burn_in;
  return cfg;
}

CellTrajectory evolve_cell(const CellProblemConfig& cfg, const PotentialSpec& potential) {
  if (cfg.p == 0.0) throw ConfigError("evolve_cell: p must be nonzero");
  const Real expected_period = 1.0 / std::abs(cfg.p);
  if (std::abs(cfg.grid.period - expected_period) > 1e-12 * expected_period)
    throw ConfigError("evolve_cell: grid period must equal 1/|p|");
  if (!(cfg.horizon > 0.0)) throw ConfigError("evolve_cell: horizon must be positive");

  const int n = cfg.grid.count;
  const Real dy = cfg.grid.spacing();
  const Real dt = (cfg.dt > 0.0) ? cfg.dt : 0.1 * dy;

  CellTrajectory traj;
  traj.cfg = cfg;
  traj.cfg.dt = dt;

  // Stability of the explicit reaction term (the implicit I1 part has none).
  Real wpp_max = 0.0;
  for (int j = 0; j < 64; ++j)
    wpp_max = std::max(wpp_max, std::abs(potential.eval(j / 64.0, 2)));
  traj.cfl_warning = !cfg.zero_potential && dt * wpp_max > 1.5;

  const long steps = static_cast<long>(std::ceil(cfg.horizon / dt));
  const long mean_stride = std::max<long>(1, steps / std::max(1, cfg.mean_samples));
  const long snap_stride = std::max<long>(1, steps / std::max(1, cfg.field_snapshots));

  // IMEX Euler in frequency space: the multiplier of I1 implicit, W'
  // explicit.  w = v - p y is periodic; I1[v] = I1[w].
  ArrayXr py(n), w = ArrayXr::Constant(n, cfg.initial_offset);
  for (int j = 0; j < n; ++j) py[j] = cfg.p * cfg.grid.node(j);

  Eigen::FFT<Real> fft;
  fft.SetFlag(Eigen::FFT<Real>::HalfSpectrum);
  const int nf = n / 2 + 1;
  Eigen::VectorXcd what = Eigen::VectorXcd::Zero(nf), fhat(nf);
  what[0] = static_cast<Real>(n) * cfg.initial_offset;
  ArrayXr denom(nf);
  for (int m = 0; m < nf; ++m)
    denom[m] = 1.0 + dt * 2.0 * kPi * m / cfg.grid.period;  // |k_m|

  std::vector<Real> times, means;
  times.reserve(steps / mean_stride + 2);
  means.reserve(steps / mean_stride + 2);

  VectorXr force(n), wreal(n);
  const auto record = [&](long step) {
    const Real tau = step * dt;
    times.push_back(tau);
    means.push_back(what[0].real() / n);
    const Real wmax = w.abs().maxCoeff();
    traj.sup_w = std::max(traj.sup_w, wmax);
    if (!std::isfinite(wmax)) {
      std::ostringstream msg;
      msg << "evolve_cell: blow-up (non-finite w) at tau = " << tau;
      throw ComputeError(msg.str());
    }
  };

  record(0);
  for (long step = 0; step < steps; ++step) {
    if (cfg.zero_potential) {
      force.setConstant(cfg.L);
    } else {
      for (int j = 0; j < n; ++j) force[j] = cfg.L - potential.eval(py[j] + w[j], 1);
    }
    fft.fwd(fhat, force);
    what = ((what + dt * fhat).array() / denom).matrix();
    fft.inv(wreal, what);
    w = wreal.array();

    const long done = step + 1;
    if (done % mean_stride == 0 || done == steps) record(done);
    if (done % snap_stride == 0 || done == steps) {
      traj.snapshot_times.push_back(done * dt);
      traj.snapshots.push_back(w);
    }
  }

  traj.times = Eigen::Map<const ArrayXr>(times.data(), times.size());
  traj.mean_w = Eigen::Map<const ArrayXr>(means.data(), means.size());
  return traj;
}

EffectiveHamiltonianEstimate estimate_lambda(const CellTrajectory& trajectory,
                                             Real burn_in) {
  if (!(burn_in >= 0.0) || !(burn_in < 1.0))
    throw ConfigError("estimate_lambda: burn_in fraction must lie in [0, 1)");
  const auto& t = trajectory.times;
  const auto& m = trajectory.mean_w;
  const Real t_end = t[t.size() - 1];
  const Real t_cut = burn_in * t_end;

  Eigen::Index first = 0;
  while (first < t.size() && t[first] < t_cut) ++first;
  const Eigen::Index count = t.size() - first;
  if (count < 10)
    throw ConfigError("estimate_lambda: need at least 10 post-burn-in samples");

  const ArrayXr tw = t.segment(first, count), mw = m.segment(first, count);
  const auto full = fit_line(tw, mw);

  const Eigen::Index half_start = count / 2;
  const auto half = fit_line(tw.segment(half_start, count - half_start),
                             mw.segment(half_start, count - half_start));

  EffectiveHamiltonianEstimate est;
  est.lambda = full.slope;
  est.slope_fit_stderr = std::max(full.stderr_slope, block_slope_stderr(tw, mw, 8));
  est.drift_times = tw;
  est.drift_means = mw;
  const Real band = 2.0 * est.slope_fit_stderr;
  est.converged = std::abs(half.slope - full.slope) <= band + 1e-12 * (1.0 + std::abs(full.slope));
  return est;
}

int orowan_grid_count(Real delta, Real p0, int points_per_unit) {
  const Real period = 1.0 / (delta * std::abs(p0));
  return next_pow2(static_cast<int>(std::ceil(period * points_per_unit)));
}

Real orowan_horizon(Real delta) { return std::max(150.0, 3.0 / (delta * delta)); }

std::vector<OrowanRow> orowan_scan(const OrowanScanConfig& scan, Real c0,
                                   const PotentialSpec& potential) {
  if (scan.deltas.empty()) throw ConfigError("orowan_scan: deltas must be nonempty");
  for (std::size_t i = 1; i < scan.deltas.size(); ++i)
    if (!(scan.deltas[i] < scan.deltas[i - 1]))
      throw ConfigError("orowan_scan: deltas must be positive and sorted descending");
  if (!(scan.deltas.back() > 0.0)) throw ConfigError("orowan_scan: deltas must be positive");
  if (scan.p0 == 0.0) throw ConfigError("orowan_scan: p0 must be nonzero");

  const Real target = c0 * std::abs(scan.p0) * scan.L0;
  std::vector<OrowanRow> rows;
  for (Real delta : scan.deltas) {
    OrowanRow row;
    row.delta = delta;
    row.p = delta * scan.p0;
    row.L = delta * scan.L0;
    row.target = target;
    try {
      const int count = orowan_grid_count(delta, scan.p0, scan.points_per_unit);
      const Real horizon = (scan.horizon > 0.0) ? scan.horizon : orowan_horizon(delta);
      auto cfg = make_cell_config(row.p, row.L, count, scan.dt, horizon, scan.burn_in);
      const auto traj = evolve_cell(cfg, potential);
      const auto est = estimate_lambda(traj, scan.burn_in);
      row.lambda = est.lambda;
      row.lambda_over_delta2 = est.lambda / (delta * delta);
      row.rel_error = (target != 0.0)
                          ? std::abs(row.lambda_over_delta2 - target) / std::abs(target)
                          : std::abs(row.lambda_over_delta2);
      row.converged = est.converged;
    } catch (const std::exception& e) {
      row.failed = true;
      row.message = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace pnlab
