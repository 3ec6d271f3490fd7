#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>

#include "core/errors.hpp"

namespace gc3b {

using Complex = std::complex<double>;
using Vec3 = Eigen::Vector3d;

inline constexpr double kPi = 3.1415926535897932384626433832795;

// Planar guiding-center configuration of the three particles. The i-th
// guiding center sits at (x[i], y[i]); the two coordinates of each particle
// are canonically conjugate, {x_i, y_j} = delta_ij, so this is simultaneously
// the configuration and the full phase space of the reduced problem.
struct GuidingCenterState {
  Vec3 x;
  Vec3 y;

  Complex z(int i) const { return Complex(x[i], y[i]); }
};

// Two complex amplitudes describing the internal (shape) degrees of freedom.
// |c1|^2 + |c2|^2 equals the shape size S.
struct Spinor {
  Complex c1{0.0, 0.0};
  Complex c2{0.0, 0.0};

  double norm2() const { return std::norm(c1) + std::norm(c2); }
};

// A point of shape space: overall size S >= 0 plus a unit vector on the
// shape sphere. The constructor renormalizes xi and rejects sizes that are
// too small to carry a meaningful direction.
class ShapePoint {
 public:
  // `scale` sets the size threshold: sizes below 1e-14 * scale are rejected.
  ShapePoint(double spin, const Vec3& xi_raw, double scale = 1.0);

  double spin() const { return spin_; }
  const Vec3& xi() const { return xi_; }

 private:
  double spin_;
  Vec3 xi_;
};

// Squared side lengths (rho[k] is the squared side opposite particle k+1)
// and the signed triangle area.
struct TriangleGeometry {
  Vec3 rho;
  double area;
};

// Conserved quantities of the reduced flow.
struct InvariantSet {
  double energy;  // V + omega_c * J
  double L;       // center-of-charge invariant, (Tx^2 + Ty^2)/6
  double S;       // shape size, J - L
  double J;       // total second moment, (1/2) sum (x_i^2 + y_i^2)
  double Tx;      // sum of y_i
  double Ty;      // sum of x_i
};

// Result of the orthonormal mode split: one centroid amplitude plus the
// shape spinor (normalized so that psi.norm2() == S).
struct ModeDecomposition {
  Complex centroid_mode;
  Spinor psi;
};

// Polar-chart data of a spinor: psi = sqrt(S) e^{-i gamma} (cos(theta/2),
// sin(theta/2) e^{-i phi}). `patch` records which component carried the
// overall phase: 0 = first component (valid away from theta = pi),
// 1 = second component (valid away from theta = 0).
struct SpinorAngles {
  double spin;
  double theta;
  double phi;
  double gamma;
  int patch;
};

}  // namespace gc3b
