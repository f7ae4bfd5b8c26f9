// Interacting dislocation particles:
//
//   dx_i/dt = c0 ( -L0 + (1/pi) sum_{j != i} 1/(x_i - x_j) ),
//
// integrated with classical RK4.  The optional wrap mode emulates the
// infinite lattice: each pair interacts through its nearest image and the
// periodic copies inside a symmetric window of image_count periods, summed
// in +-pairs so a perfect lattice cancels exactly.
#pragma once

#include <optional>
#include <vector>

#include "pnlab/types.hpp"

namespace pnlab {

struct ParticleState {
  ArrayXr positions;   // strictly increasing
  Real t = 0.0;
  Real c0 = 0.0;
  Real L0 = 0.0;
  std::optional<Real> wrap;  // period for lattice emulation
  int image_count = 8;
  Real collision_threshold = 1e-6;
};

ParticleState make_lattice_state(int count, Real spacing, Real c0, Real L0,
                                 bool wrapped);

// Velocities at the current positions.  Throws ComputeError naming the
// offending pair if a gap is at or below the collision threshold.
ArrayXr particle_rhs(const ParticleState& state);

using ParticleTrajectory = std::vector<ParticleState>;

// Fixed-step RK4 up to time T; states at every multiple of dt.  Halts with
// ComputeError on collision or non-finite positions.
ParticleTrajectory integrate(const ParticleState& state, Real dt, Real T);

// (mean displacement over all particles) / (elapsed time).
Real lattice_mean_velocity(const ParticleTrajectory& trajectory);

}  // namespace pnlab
