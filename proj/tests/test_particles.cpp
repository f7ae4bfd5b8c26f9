#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pnlab/particles.hpp"

using namespace pnlab;

namespace {
constexpr Real kPi = std::numbers::pi_v<Real>;
constexpr Real kC0 = 2.0 * kPi;
}

TEST_SUITE("particles") {

TEST_CASE("single particle drifts at exactly -c0 L0") {
  const auto state = make_lattice_state(1, 1.0, kC0, 1.0, false);
  const auto v = particle_rhs(state);
  CHECK(v[0] == -kC0);
  const auto traj = integrate(state, 1e-3, 1.0);
  CHECK(traj.back().positions[0] == doctest::Approx(-kC0).epsilon(1e-12));
}

TEST_CASE("two particles at +-d with L0 = 0") {
  ParticleState s;
  s.positions = ArrayXr(2);
  s.positions << -1.0, 1.0;
  s.c0 = kC0;
  s.L0 = 0.0;
  SUBCASE("velocities are -+ c0/(2 pi d)") {
    const auto v = particle_rhs(s);
    CHECK(v[0] == doctest::Approx(-1.0).epsilon(1e-14));  // c0/(2 pi) = 1 at d = 1
    CHECK(v[1] == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("gap obeys gap(t)^2 = 4 (d0^2 + c0 t / pi)") {
    const auto traj = integrate(s, 1e-4, 1.0);
    const Real gap = traj.back().positions[1] - traj.back().positions[0];
    const Real exact = 2.0 * std::sqrt(1.0 + kC0 / kPi);
    CHECK(std::abs(gap - exact) / exact <= 1e-6);
  }
  SUBCASE("fourth-order convergence under dt halving") {
    const auto final_err = [&](Real dt) {
      const auto traj = integrate(s, dt, 1.0);
      return std::abs(traj.back().positions[1] - std::sqrt(1.0 + kC0 / kPi));
    };
    const Real e1 = final_err(0.04), e2 = final_err(0.02), e3 = final_err(0.01);
    CHECK(e1 / e2 >= 10.0);
    CHECK(e1 / e2 <= 26.0);
    CHECK(e2 / e3 >= 10.0);
    CHECK(e2 / e3 <= 26.0);
  }
  SUBCASE("rescaling x/delta, t/delta^2 maps solutions to solutions") {
    const Real delta = 0.25;
    ParticleState wide = s;
    wide.positions /= delta;
    const auto traj = integrate(wide, 1e-4 / (delta * delta), 1.0 / (delta * delta));
    const Real gap = traj.back().positions[1] - traj.back().positions[0];
    const Real exact = 2.0 * std::sqrt(1.0 / (delta * delta) + kC0 / (kPi * delta * delta));
    CHECK(std::abs(gap - exact) / exact <= 1e-6);
  }
}

TEST_CASE("wrapped equispaced lattice cancels interactions exactly") {
  const auto state = make_lattice_state(32, 1.0, kC0, 1.0, true);
  const auto v = particle_rhs(state);
  for (Eigen::Index i = 0; i < 32; ++i) CHECK(std::abs(v[i] + kC0) <= 1e-12);

  SUBCASE("mean velocity equals -c0 L0") {
    const auto traj = integrate(state, 1e-3, 0.5);
    CHECK(std::abs(lattice_mean_velocity(traj) + kC0) <= 1e-6);
  }
  SUBCASE("no stress, no drift") {
    const auto calm = make_lattice_state(32, 1.0, kC0, 0.0, true);
    const auto traj = integrate(calm, 1e-3, 0.5);
    CHECK(std::abs(lattice_mean_velocity(traj)) <= 1e-10);
  }
  SUBCASE("odd particle count pairs the half-period separation") {
    const auto odd = make_lattice_state(31, 1.0, kC0, 1.0, true);
    const auto v_odd = particle_rhs(odd);
    for (Eigen::Index i = 0; i < 31; ++i) CHECK(std::abs(v_odd[i] + kC0) <= 1e-12);
  }
}

TEST_CASE("free lattice: interior particles near the lattice drift") {
  const auto state = make_lattice_state(64, 1.0, kC0, 1.0, false);
  const auto traj = integrate(state, 1e-3, 0.05);
  const auto& x0 = traj.front().positions;
  const auto& xf = traj.back().positions;
  Real mean = 0.0;
  for (int i = 24; i < 40; ++i) mean += xf[i] - x0[i];
  mean /= 16 * 0.05;
  CHECK(std::abs(mean + kC0) / kC0 <= 0.05);
}

TEST_CASE("translation equivariance") {
  ParticleState s;
  s.positions = ArrayXr(3);
  s.positions << -1.3, 0.2, 2.0;
  s.c0 = kC0;
  s.L0 = 0.5;
  const auto t1 = integrate(s, 1e-3, 0.2);
  ParticleState shifted = s;
  shifted.positions += 2048.0;
  const auto t2 = integrate(shifted, 1e-3, 0.2);
  for (Eigen::Index i = 0; i < 3; ++i)
    CHECK(std::abs(t2.back().positions[i] - t1.back().positions[i] - 2048.0) <= 1e-10);
}

TEST_CASE("ordering is preserved along trajectories") {
  auto state = make_lattice_state(8, 0.5, kC0, 2.0, false);
  const auto traj = integrate(state, 1e-3, 0.3);
  for (const auto& st : traj)
    for (Eigen::Index i = 0; i + 1 < st.positions.size(); ++i)
      CHECK(st.positions[i + 1] > st.positions[i]);
}

TEST_CASE("collisions are reported with the offending pair") {
  ParticleState s;
  s.positions = ArrayXr(2);
  s.positions << 0.0, 5e-7;  // below the default collision threshold
  s.c0 = kC0;
  s.L0 = 0.0;
  CHECK_THROWS_WITH_AS(static_cast<void>(particle_rhs(s)),
                       doctest::Contains("collision between particles 0 and 1"),
                       ComputeError);
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(make_lattice_state(0, 1.0, kC0, 1.0, false), ConfigError);
  CHECK_THROWS_AS(make_lattice_state(4, -1.0, kC0, 1.0, false), ConfigError);
  const auto s = make_lattice_state(4, 1.0, kC0, 1.0, false);
  CHECK_THROWS_AS(integrate(s, 0.0, 1.0), ConfigError);
  CHECK_THROWS_AS(integrate(s, 0.1, -1.0), ConfigError);
  CHECK_THROWS_AS(lattice_mean_velocity(ParticleTrajectory{}), ConfigError);
  CHECK_THROWS_AS(lattice_mean_velocity(ParticleTrajectory{s}), ComputeError);
}

}  // TEST_SUITE
