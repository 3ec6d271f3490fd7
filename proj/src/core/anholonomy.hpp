#pragma once

#include <optional>
#include <vector>

#include "core/potential.hpp"
#include "core/shape_dynamics.hpp"
#include "core/types.hpp"

namespace gc3b {

// omega_dyn = omega_c + (dV/dS)_xi: the rotation rate a co-moving observer
// attributes to the triangle even when its shape is frozen.
double dynamical_frequency(const Potential& pot, const ShapePoint& p,
                           double omega_c);

struct SpinorSample {
  double t = 0.0;
  Spinor psi;
  Vec3 xi = Vec3::UnitZ();
  double theta = 0.0;  // polar angle of xi from the third Bloch axis
  double phi = 0.0;    // continuously unwrapped azimuth of the chart below
  double gamma = 0.0;  // continuously unwrapped overall phase, psi1-carried
};

// Trajectory of the two-component shape spinor under
//   i psi_dot = [a0 + a.sigma] psi,
//   a0 = omega_c + dV/dS - (grad_xi V . xi)/S,   a = (grad_xi V)/S,
// integrated with unitary (norm-preserving) group steps. gamma and phi are
// the angles of the polar parameterization
//   psi = sqrt(S) e^{-i gamma} (cos(theta/2), sin(theta/2) e^{-i phi}),
// unwrapped continuously along the trajectory.
struct SpinorTrajectory {
  std::vector<SpinorSample> samples;
  double spin = 0.0;
  double max_norm_drift = 0.0;  // max relative |psi^dag psi - S0| / S0
  // True when the trajectory passed within angular distance 1e-6 of the
  // parameterization's singular direction (psi1 -> 0); gamma may then have
  // slipped by a multiple of 2*pi across the passage.
  bool gauge_singularity = false;
};

SpinorTrajectory integrate_spinor(const Potential& pot, const Spinor& psi0,
                                  double omega_c, double t_end, double tol);

// Oriented solid angle enclosed by the closed sampled curve of `orbit`:
// accumulation of (1 - cos theta) d phi with continuous phi-unwrapping,
// theta measured from the second Bloch axis, then branch-reduced to [0, 4pi)
// (the area of the region enclosed on the left of the traversal, independent
// of the accumulation chart). Fixed-point records give 0.
double solid_angle(const OrbitRecord& orbit);

struct AnholonomyReport {
  double T_s = 0.0;             // shape period (NaN for fixed-point input)
  double omega_dyn_avg = 0.0;   // time average of dynamical_frequency
  double Omega = 0.0;           // enclosed solid angle, branch-reduced
  double omega_geo = 0.0;       // -Omega / (2 T_s)
  double omega_r = 0.0;         // omega_dyn_avg + omega_geo
  double I_s = 0.0;             // S * Omega / (4 pi)
  double delta_gamma_direct = 0.0;  // gamma(T_s) - gamma(0) from the spinor
  double spin = 0.0;
  double energy = 0.0;          // V(S, xi0)
  bool fixed_point = false;
  bool gauge_singularity = false;
};

// Full frequency split on the periodic orbit through p0, self-checked against
// direct spinor integration: |delta_gamma_direct - omega_r T_s| mod 2pi must
// stay below tol. Fixed-point inputs yield the degenerate report
// omega_r = omega_dyn(xi*).
AnholonomyReport report(const Potential& pot, const ShapePoint& p0,
                        double omega_c, double tol);

// Action of the level curve at energy E: I_s = S * Omega(E, S) / (4 pi).
// When the level set has several branches, returns the branch nearest the
// hint direction (default: the north pole of the shape sphere).
double shape_action(const Potential& pot, double spin, double energy,
                    const std::optional<Vec3>& hint = std::nullopt);

}  // namespace gc3b
