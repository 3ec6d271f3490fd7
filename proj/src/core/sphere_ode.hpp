#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "core/types.hpp"

namespace gc3b {

// Flow of the form xi_dot = axis(xi) x xi on the unit sphere. Steps are exact
// rotations (Rodrigues map), so |xi| is preserved to roundoff with no
// projection or renormalization anywhere in the loop.
using AxisField = std::function<Vec3(const Vec3&)>;

// Scalar integrand q_dot = f(xi) accumulated along the flow with the same
// Runge-Kutta stages (order 4).
using PathIntegrand = std::function<double(const Vec3&)>;

// exp(hat(w)) v: rotation of v about axis w by angle |w|.
Vec3 rotate_about(const Vec3& w, const Vec3& v);

// Inverse differential of the exponential map on so(3), truncated to the
// order needed by a 4th-order Runge-Kutta-Munthe-Kaas scheme:
// v - (1/2) w x v + (1/12) w x (w x v).
Vec3 dexpinv_so3(const Vec3& w, const Vec3& v);

struct SphereStepOut {
  Vec3 xi;
  std::vector<double> quad;  // increment of each integrand over the step
};

// Single 4th-order Munthe-Kaas step of size h (no error control).
SphereStepOut rkmk4_sphere_step(const AxisField& axis,
                                const std::vector<PathIntegrand>& quads,
                                const Vec3& xi, double h);

struct FlowSample {
  double t = 0.0;
  Vec3 xi = Vec3::UnitZ();
  std::vector<double> quad;  // accumulated integrals since construction
};

struct AdaptiveOptions {
  double tol = 1e-10;  // local error tolerance on xi per step (chordal)
  double h_init = 0.0; // <= 0 selects from the initial rotation rate
  double h_max = std::numeric_limits<double>::infinity();
  // Cap on the rotation angle per step. Keeps sampling dense enough for event
  // detection and path quadrature even when the local error vanishes (fields
  // with a constant axis are integrated exactly by the Rodrigues map).
  double max_rotation = 0.1;
  long max_steps = 200000000L;
};

// Adaptive driver with step-doubling error control. The caller advances the
// flow step by step; after each accepted step both the previous and the
// current sample are available, and states strictly inside the last step can
// be re-evaluated (used for event refinement).
class SphereFlow {
 public:
  SphereFlow(AxisField axis, std::vector<PathIntegrand> quads, const Vec3& xi0,
             double t0, const AdaptiveOptions& opt);

  const FlowSample& current() const { return cur_; }
  const FlowSample& previous() const { return prev_; }
  long accepted_steps() const { return steps_; }

  // Takes one accepted error-controlled step, never moving past t_cap.
  // Returns the step size actually taken (0 when already at t_cap).
  double advance(double t_cap);

  // Re-evaluates the flow at t in [previous().t, current().t].
  FlowSample eval_between(double t) const;

 private:
  SphereStepOut controlled_step(const Vec3& xi, double h) const;

  AxisField axis_;
  std::vector<PathIntegrand> quads_;
  AdaptiveOptions opt_;
  FlowSample prev_, cur_;
  double h_ = 0.0;
  long steps_ = 0;
};

}  // namespace gc3b
