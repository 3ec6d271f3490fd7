#pragma once

#include <array>
#include <optional>

#include "core/types.hpp"

namespace gc3b {

class Potential;  // forward declaration (potential.hpp)

// --- fixed geometric data -------------------------------------------------

// Unit axes m_k on the shape sphere associated with the three sides:
// m_k = (sin(2 pi k / 3), 0, cos(2 pi k / 3)), k = 1, 2, 3.
// The squared side opposite particle k is rho_k = 2 S (1 + m_k . xi); the
// antipodes n_k = -m_k are the two-particle collision directions.
const std::array<Vec3, 3>& side_axes();

// Orthonormal 3x3 mode matrix whose rows split (z_1, z_2, z_3) into the
// centroid mode and the two shape modes:
//   row 0:  ( 1,  1,  1)/sqrt(3)
//   row 1:  (-1,  1,  0)/sqrt(2)
//   row 2:  ( 1,  1, -2)/sqrt(6)
const Eigen::Matrix3d& mode_matrix();

// Applying rows 1-2 of mode_matrix() to raw z gives amplitudes equal to
// kModeAmplitudeScale times the spinor convention used everywhere else.
inline constexpr double kModeAmplitudeScale = 1.4142135623730951;  // sqrt(2)

// Sizes below kShapeSizeEpsilon * scale cannot carry a direction.
inline constexpr double kShapeSizeEpsilon = 1e-14;

// --- conversions ----------------------------------------------------------

// Shape spinor of a configuration given as complex positions z_i = x_i + i y_i:
//   psi1 = (z2 - z1)/2,   psi2 = (z1 + z2 - 2 z3) / (2 sqrt(3)).
// Invariant under a common shift of all z_i.
Spinor spinor_from_positions(const std::array<Complex, 3>& z);

// Size S = |psi|^2 and unit shape vector xi = psi† sigma psi / S.
// Throws ZeroSizeShape when S < kShapeSizeEpsilon * scale.
ShapePoint bloch_from_spinor(const Spinor& psi, double scale = 1.0);

// Squared side lengths and signed area:
//   rho_k = 2 S (1 + m_k . xi),   area = (sqrt(3)/2) S xi_2.
// With this sign convention a counterclockwise-labeled triangle has
// xi_2 = -1 on the equilateral point, i.e. area = -shoelace_area.
TriangleGeometry triangle_from_shape(const ShapePoint& p);

// Plain shoelace area of the triangle (z_1, z_2, z_3); positive for
// counterclockwise vertex order. Provided for cross-checks against the
// triangle_from_shape sign convention (they are equal and opposite).
double shoelace_area(const std::array<Complex, 3>& z);

// Orthonormal mode split of a configuration. centroid_mode is the raw
// centroid amplitude (z1 + z2 + z3)/sqrt(3); psi uses the same normalization
// as spinor_from_positions so that psi.norm2() equals the shape size S.
ModeDecomposition decompose(const GuidingCenterState& state);

// Inverse of decompose: rebuild positions from centroid mode, shape point
// and overall orientation angle gamma (see SpinorAngles for the chart).
// Shifting gamma -> gamma + chi rotates all relative positions by -chi.
// Throws ZeroSizeShape when p was constructed with (numerically) zero size.
std::array<Complex, 3> reconstruct_positions(Complex centroid_mode,
                                             const ShapePoint& p,
                                             double gamma);

// Conserved quantities. `pot` may be null, in which case V = 0 is used for
// the energy. energy = V + omega_c * J.
InvariantSet invariants(const GuidingCenterState& state, const Potential* pot,
                        double omega_c);

// Polar-chart angles of a spinor. Chooses the chart patch with the larger
// amplitude so the extraction is well conditioned everywhere; `patch` in the
// result records the choice. Throws ZeroSizeShape on a null spinor.
SpinorAngles spinor_angles(const Spinor& psi, double scale = 1.0);

// Spinor with the given shape point and orientation angle gamma
// (gamma = 0, theta/phi from xi; inverse of spinor_angles on patch 0).
Spinor spinor_from_shape(const ShapePoint& p, double gamma);

}  // namespace gc3b
