#pragma once

#include <optional>
#include <vector>

#include "core/potential.hpp"
#include "core/sphere_ode.hpp"
#include "core/types.hpp"

namespace gc3b {

enum class OrbitClass { Periodic, FixedPoint, SeparatrixSuspect, Truncated };

struct OrbitSample {
  double t;
  Vec3 xi;
};

struct OrbitRecord {
  std::vector<OrbitSample> samples;
  double spin = 0.0;
  double energy = 0.0;  // V(S, xi), conserved along the flow
  std::optional<double> period;
  OrbitClass classification = OrbitClass::Truncated;
  double max_norm_drift = 0.0;    // max | |xi| - 1 | over all samples
  double max_energy_drift = 0.0;  // max relative |V - V0|
};

enum class Stability { Elliptic, Hyperbolic, Degenerate, Singular };

struct FixedPointReport {
  Vec3 xi_star = Vec3::UnitZ();
  Stability stability = Stability::Degenerate;
  // Imaginary part (elliptic) or real part (hyperbolic) of the linearization
  // eigenvalue; for conical points it is the angular rate measured on the
  // classification ring.
  double rate = 0.0;
  double value = 0.0;     // V(S, xi_star)
  double residual = 0.0;  // |grad_xi V x xi| at the point
};

struct PortraitCurve {
  double energy = 0.0;
  std::vector<OrbitSample> samples;
  OrbitClass classification = OrbitClass::Truncated;
  std::optional<double> period;
};

struct PortraitSet {
  double spin = 0.0;
  std::vector<PortraitCurve> curves;
};

// Rotation-axis field of the shape flow: a(xi) = (2/S) grad_xi V. The flow is
// xi_dot = a x xi; only the tangential part of the gradient contributes.
Vec3 shape_axis(const Potential& pot, const ShapePoint& p);

// xi_dot = (2/S) (grad_xi V) x xi.
Vec3 shape_velocity(const Potential& pot, const ShapePoint& p);

// True when the shape velocity is below the scale-free fixed-point threshold
// |a x xi| <= 1e-12 |a| (and in particular when the gradient vanishes).
bool is_fixed_point_input(const Potential& pot, const ShapePoint& p);

OrbitRecord integrate_shape(const Potential& pot, const ShapePoint& p0,
                            double t_end, double tol, int sample_stride = 1);

struct PeriodResult {
  double period = 0.0;
  OrbitRecord orbit;  // exactly one period, classification Periodic
};

PeriodResult find_period(const Potential& pot, const ShapePoint& p0, double tol);

std::vector<FixedPointReport> fixed_points(const Potential& pot, double spin);

PortraitSet portrait(const Potential& pot, double spin,
                     const std::vector<double>& energies, int resolution);

// 42 well-spread unit vectors (icosahedron vertices plus edge midpoints),
// used as seeds for fixed-point searches and level-set location.
const std::vector<Vec3>& icosahedral_grid();

// Points on the level set {xi : V(S, xi) = energy}, one per crossing edge of a
// refined icosahedral test mesh. Empty when the level set is empty.
std::vector<Vec3> level_set_points(const Potential& pot, double spin,
                                   double energy);

}  // namespace gc3b
