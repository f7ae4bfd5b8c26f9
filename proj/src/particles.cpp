#include "pnlab/particles.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace pnlab {

namespace {

constexpr Real kPi = std::numbers::pi_v<Real>;

void check_gaps(const ParticleState& state) {
  const auto& x = state.positions;
  for (Eigen::Index i = 0; i + 1 < x.size(); ++i) {
    const Real gap = x[i + 1] - x[i];
    if (!(gap > state.collision_threshold)) {
      std::ostringstream msg;
      msg << "particles: collision between particles " << i << " and " << i + 1
          << " (gap " << gap << " at t = " << state.t << ")";
      throw ComputeError(msg.str());
    }
  }
}

// Interaction sum of particle i.  In wrap mode each pair interacts through
// its nearest image plus image_count periodic copies a side, accumulated in
// +-pairs so that mirrored separations cancel exactly in floating point; a
// separation of exactly Q/2 gets the symmetric window [-(M+1/2)Q, (M+1/2)Q],
// whose images pair to an exact zero.
Real interaction_sum(const ParticleState& state, Eigen::Index i) {
  const auto& x = state.positions;
  const auto n = x.size();
  Real acc = 0.0;
  if (!state.wrap) {
    for (Eigen::Index j = 0; j < n; ++j)
      if (j != i) acc += 1.0 / (x[i] - x[j]);
    return acc;
  }
  const Real Q = *state.wrap;
  const int M = state.image_count;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (j == i) {
      // own images: cancel pairwise, contribute zero
      continue;
    }
    Real u = x[i] - x[j];
    u -= Q * std::round(u / Q);  // nearest image, u in [-Q/2, Q/2]
    if (std::abs(u) == 0.5 * Q) {
      for (int m = 0; m <= M; ++m) {
        const Real z = (m + 0.5) * Q;
        acc += 1.0 / z - 1.0 / z;  // explicit +-pair of the edge images
      }
      continue;
    }
    acc += 1.0 / u;
    for (int m = 1; m <= M; ++m) acc += 2.0 * u / (u * u - (m * Q) * (m * Q));
  }
  return acc;
}

}  // namespace

ParticleState make_lattice_state(int count, Real spacing, Real c0, Real L0,
                                 bool wrapped) {
  if (count < 1) throw ConfigError("particles: count must be >= 1");
  if (!(spacing > 0.0)) throw ConfigError("particles: spacing must be positive");
  ParticleState state;
  state.positions = ArrayXr::LinSpaced(count, 0.0, spacing * (count - 1));
  state.c0 = c0;
  state.L0 = L0;
  if (wrapped) state.wrap = spacing * count;
  return state;
}

ArrayXr particle_rhs(const ParticleState& state) {
  if (state.positions.size() == 0) throw ConfigError("particles: empty state");
  check_gaps(state);
  const auto n = state.positions.size();
  ArrayXr v(n);
  for (Eigen::Index i = 0; i < n; ++i)
    v[i] = state.c0 * (-state.L0 + interaction_sum(state, i) / kPi);
  return v;
}

ParticleTrajectory integrate(const ParticleState& state, Real dt, Real T) {
  if (!(dt > 0.0) || !(T > 0.0)) throw ConfigError("particles: dt and T must be positive");
  ParticleTrajectory traj;
  traj.push_back(state);
  const long steps = static_cast<long>(std::llround(T / dt));
  ParticleState cur = state;
  for (long s = 0; s < steps; ++s) {
    // classical RK4
    ParticleState probe = cur;
    const ArrayXr k1 = particle_rhs(cur);
    probe.positions = cur.positions + 0.5 * dt * k1;
    probe.t = cur.t + 0.5 * dt;
    const ArrayXr k2 = particle_rhs(probe);
    probe.positions = cur.positions + 0.5 * dt * k2;
    const ArrayXr k3 = particle_rhs(probe);
    probe.positions = cur.positions + dt * k3;
    probe.t = cur.t + dt;
    const ArrayXr k4 = particle_rhs(probe);
    cur.positions += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    cur.t += dt;
    if (!cur.positions.isFinite().all())
      throw ComputeError("particles: non-finite positions during integration");
    check_gaps(cur);
    traj.push_back(cur);
  }
  return traj;
}

Real lattice_mean_velocity(const ParticleTrajectory& trajectory) {
  if (trajectory.empty()) throw ConfigError("lattice_mean_velocity: empty trajectory");
  const auto& first = trajectory.front();
  const auto& last = trajectory.back();
  const Real elapsed = last.t - first.t;
  if (!(elapsed > 0.0)) throw ComputeError("lattice_mean_velocity: zero elapsed time");
  return (last.positions - first.positions).mean() / elapsed;
}

}  // namespace pnlab
