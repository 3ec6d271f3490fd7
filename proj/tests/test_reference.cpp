#include <array>
#include <cmath>
#include <vector>

#include "core/geometry.hpp"
#include "core/potential.hpp"
#include "core/reference.hpp"

#include "doctest.h"
#include "test_util.hpp"

using namespace gc3b;

namespace {

GuidingCenterState sample_state() {
  GuidingCenterState s;
  s.x = Vec3(1.0, -0.3, 0.2);
  s.y = Vec3(0.1, 0.5, -0.7);
  return s;
}

ExactState free_exact_state(double B) {
  ExactState s;
  s.q = {Eigen::Vector2d(0.3, -0.2), Eigen::Vector2d(-0.6, 0.45),
         Eigen::Vector2d(0.9, 0.1)};
  s.p = {Eigen::Vector2d(0.2, 0.7), Eigen::Vector2d(-0.35, -0.1),
         Eigen::Vector2d(0.5, -0.4)};
  s.params.B = B;
  s.params.e = 1.0;
  s.params.omega_c = 0.0;
  return s;
}

Eigen::Vector2d guiding_center(const Eigen::Vector2d& q,
                               const Eigen::Vector2d& p, double eB) {
  return {q[0] - p[1] / eB, p[0] / eB};
}

}  // namespace

TEST_CASE("guiding-center flow of the bare rotation term") {
  const auto none = Potential::power(0.0, 2.0);
  const auto s0 = sample_state();
  const double wc = 1.0;

  // Full turn: every coordinate returns.
  const auto turn = integrate_gc6(none, s0, wc, 2.0 * kPi, 1e-10);
  const auto& back = turn.samples.back().state;
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(back.x[i] - s0.x[i]) < 1e-12);
    CHECK(std::abs(back.y[i] - s0.y[i]) < 1e-12);
  }
  CHECK(turn.max_drift_energy < 1e-13);
  CHECK(turn.max_drift_L < 1e-13);
  CHECK(turn.max_drift_S < 1e-13);

  // Quarter turn: z -> -i z, i.e. (x, y) -> (y, -x).
  const auto quarter = integrate_gc6(none, s0, wc, 0.5 * kPi, 1e-10);
  const auto& mid = quarter.samples.back().state;
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(mid.x[i] - s0.y[i]) < 1e-12);
    CHECK(std::abs(mid.y[i] + s0.x[i]) < 1e-12);
  }
}

TEST_CASE("guiding-center flow conserves its three invariants") {
  const auto pot = Potential::power(1.0, 2.0);
  const auto s0 = sample_state();
  const double wc = 0.7;
  const auto traj = integrate_gc6(pot, s0, wc, 1.0, 1e-9);
  const auto inv0 = invariants(s0, &pot, wc);
  CHECK(traj.energy0 == doctest::Approx(inv0.energy).epsilon(1e-14));
  CHECK(traj.L0 == doctest::Approx(inv0.L).epsilon(1e-14));
  CHECK(traj.S0 == doctest::Approx(inv0.S).epsilon(1e-14));
  CHECK(traj.max_drift_energy < 1e-11);
  CHECK(traj.max_drift_L < 1e-11);
  CHECK(traj.max_drift_S < 1e-11);
  const auto invN = invariants(traj.samples.back().state, &pot, wc);
  CHECK(invN.energy == doctest::Approx(inv0.energy).epsilon(1e-11));
  CHECK(invN.L == doctest::Approx(inv0.L).epsilon(1e-11));
  CHECK(invN.S == doctest::Approx(inv0.S).epsilon(1e-11));
}

TEST_CASE("magnetic flow without interaction conserves guiding centers") {
  const double eB = 2.0;
  const auto none = Potential::power(0.0, 2.0);
  const auto s0 = free_exact_state(eB);
  const double t_cyc = 2.0 * kPi / eB;  // unit mass, unit charge
  const auto traj = integrate_exact(none, s0, 20.0 * t_cyc, 1e-10, 16);
  CHECK(traj.max_drift_energy < 1e-12);

  std::array<Eigen::Vector2d, 3> r0;
  std::array<double, 3> pi0;
  for (int i = 0; i < 3; ++i) {
    r0[i] = guiding_center(s0.q[i], s0.p[i], eB);
    pi0[i] = kinetic_momentum(s0.q[i], s0.p[i], eB).norm();
  }
  const double l0 = exact_angular_momentum(s0);
  for (const auto& smp : traj.samples) {
    for (int i = 0; i < 3; ++i) {
      CHECK((guiding_center(smp.q[i], smp.p[i], eB) - r0[i]).norm() < 1e-12);
      CHECK(std::abs(kinetic_momentum(smp.q[i], smp.p[i], eB).norm() - pi0[i]) <
            1e-10);
    }
    ExactState at;
    at.q = smp.q;
    at.p = smp.p;
    at.params = s0.params;
    CHECK(std::abs(exact_angular_momentum(at) - l0) < 1e-12);
    CHECK(std::abs(exact_energy(none, at) - traj.energy0) < 1e-12);
  }

  // The reduced track of a drift-free run is a frozen configuration.
  const auto reduced = reduce_exact(traj, ReductionMap::standard(eB));
  REQUIRE(reduced.size() == traj.samples.size());
  for (const auto& smp : reduced) {
    for (int i = 0; i < 3; ++i) {
      CHECK(std::abs(smp.state.x[i] - reduced.front().state.x[i]) < 1e-10);
      CHECK(std::abs(smp.state.y[i] - reduced.front().state.y[i]) < 1e-10);
    }
  }
}

TEST_CASE("reduction map scales conserved centers into canonical pairs") {
  const double eB = 4.0;
  std::array<Eigen::Vector2d, 3> q = {Eigen::Vector2d(1.0, 2.0),
                                      Eigen::Vector2d(-0.5, 0.3),
                                      Eigen::Vector2d(0.2, -0.7)};
  std::array<Eigen::Vector2d, 3> p = {Eigen::Vector2d(0.4, -1.1),
                                      Eigen::Vector2d(0.9, 0.6),
                                      Eigen::Vector2d(-0.2, 0.05)};
  const auto out = ReductionMap::standard(eB).apply(q, p);
  CHECK(out.x[0] == doctest::Approx(2.55).epsilon(1e-15));
  CHECK(out.y[0] == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(out.x[1] == doctest::Approx(-1.3).epsilon(1e-15));
  CHECK(out.y[1] == doctest::Approx(0.45).epsilon(1e-15));
  CHECK(out.x[2] == doctest::Approx(0.375).epsilon(1e-15));
  CHECK(out.y[2] == doctest::Approx(-0.1).epsilon(1e-15));
}

TEST_CASE("mapped coordinates are canonically conjugate pairs") {
  const double eB = 3.0;
  auto s = free_exact_state(eB);
  const auto map = ReductionMap::standard(eB);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const double want = (i == j) ? 1.0 : 0.0;
      CHECK(std::abs(bracket_probe(map, s, i, j) - want) < 1e-6);
    }
  }
}

TEST_CASE("synthesized magnetic states reduce back to the requested shape") {
  const double B = 100.0;
  const ShapePoint shape(1.0, Vec3(0.2, 0.9, 0.1).normalized());
  const auto s = exact_state_from_shape(shape, B, 1e-3, 7u, 1.0);
  CHECK(s.params.B == B);
  CHECK(s.params.omega_c == 1.0);

  const auto reduced = ReductionMap::standard(B).apply(s.q, s.p);
  const auto dec = decompose(reduced);
  const auto back = bloch_from_spinor(dec.psi);
  CHECK(back.spin() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK((back.xi() - shape.xi()).norm() < 1e-12);

  // Each particle rides a cyclotron circle whose radius is the requested
  // fraction of the smallest physical side.
  const auto tri = triangle_from_shape(shape);
  const double min_side_phys =
      std::sqrt(tri.rho.minCoeff()) / std::sqrt(B);
  const double want_pi = B * 1e-3 * min_side_phys;
  for (int i = 0; i < 3; ++i) {
    CHECK(kinetic_momentum(s.q[i], s.p[i], B).norm() ==
          doctest::Approx(want_pi).epsilon(1e-12));
  }

  // Same seed reproduces the state; another seed shifts only the phases.
  const auto again = exact_state_from_shape(shape, B, 1e-3, 7u, 1.0);
  for (int i = 0; i < 3; ++i) {
    CHECK((s.q[i] - again.q[i]).norm() == 0.0);
    CHECK((s.p[i] - again.p[i]).norm() == 0.0);
  }
  const auto other = exact_state_from_shape(shape, B, 1e-3, 8u, 1.0);
  const auto red2 = ReductionMap::standard(B).apply(other.q, other.p);
  const auto back2 = bloch_from_spinor(decompose(red2).psi);
  CHECK((back2.xi() - shape.xi()).norm() < 1e-12);
}

TEST_CASE("field sweep error falls off near the predicted first order") {
  const auto pot = Potential::power(1.0, 2.0);
  const ShapePoint shape(1.0, Vec3(std::sqrt(0.84), 0.4, 0.0));
  const auto sweep = b_sweep(pot, shape, {100.0, 400.0}, 0.08);
  REQUIRE(sweep.points.size() == 2);
  CHECK(sweep.points[0].B == 100.0);
  CHECK(sweep.points[1].B == 400.0);
  CHECK(sweep.points[0].max_angle_error < 7.2e-7);
  CHECK(sweep.points[1].max_angle_error < 1.7e-7);
  CHECK(sweep.points[1].max_angle_error < sweep.points[0].max_angle_error);
  CHECK(sweep.slope > -1.4);
  CHECK(sweep.slope < -0.6);
}

TEST_CASE("log-log fit recovers a synthetic power law") {
  std::vector<SweepPoint> pts;
  for (double b : {50.0, 100.0, 200.0, 400.0}) {
    pts.push_back({b, 3.7e-4 * std::pow(b, -1.3)});
  }
  CHECK(fit_loglog_slope(pts) == doctest::Approx(-1.3).epsilon(1e-12));
}
