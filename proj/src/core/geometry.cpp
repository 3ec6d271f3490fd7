#include "core/geometry.hpp"

#include <cmath>

#include "core/potential.hpp"

namespace gc3b {

namespace {
const double kSqrt3 = std::sqrt(3.0);
const double kHalfSqrt3 = 0.5 * std::sqrt(3.0);
}  // namespace

ShapePoint::ShapePoint(double spin, const Vec3& xi_raw, double scale) {
  if (!(spin >= 0.0) || !xi_raw.allFinite()) {
    raise(ErrorCode::InvalidArgument, "shape point requires spin >= 0 and finite xi");
  }
  if (spin < kShapeSizeEpsilon * scale) {
    raise(ErrorCode::ZeroSizeShape, "shape size below resolvable threshold");
  }
  const double n = xi_raw.norm();
  if (n == 0.0) {
    raise(ErrorCode::InvalidArgument, "shape direction vector must be nonzero");
  }
  spin_ = spin;
  xi_ = xi_raw / n;
}

const std::array<Vec3, 3>& side_axes() {
  // Exact components so that m_1 + m_2 + m_3 == 0 holds bitwise.
  static const std::array<Vec3, 3> axes = {
      Vec3(kHalfSqrt3, 0.0, -0.5),
      Vec3(-kHalfSqrt3, 0.0, -0.5),
      Vec3(0.0, 0.0, 1.0),
  };
  return axes;
}

const Eigen::Matrix3d& mode_matrix() {
  static const Eigen::Matrix3d m = [] {
    Eigen::Matrix3d w;
    const double s3 = 1.0 / std::sqrt(3.0);
    const double s2 = 1.0 / std::sqrt(2.0);
    const double s6 = 1.0 / std::sqrt(6.0);
    w << s3, s3, s3,
        -s2, s2, 0.0,
        s6, s6, -2.0 * s6;
    return w;
  }();
  return m;
}

Spinor spinor_from_positions(const std::array<Complex, 3>& z) {
  Spinor psi;
  psi.c1 = 0.5 * (z[1] - z[0]);
  psi.c2 = (z[0] + z[1] - 2.0 * z[2]) / (2.0 * kSqrt3);
  return psi;
}

ShapePoint bloch_from_spinor(const Spinor& psi, double scale) {
  const double s = psi.norm2();
  if (s < kShapeSizeEpsilon * std::max(scale, 0.0)) {
    raise(ErrorCode::ZeroSizeShape, "spinor norm too small to define a shape direction");
  }
  const Complex cross = std::conj(psi.c1) * psi.c2;
  Vec3 xi(2.0 * cross.real() / s, 2.0 * cross.imag() / s,
          (std::norm(psi.c1) - std::norm(psi.c2)) / s);
  return ShapePoint(s, xi, scale);
}

TriangleGeometry triangle_from_shape(const ShapePoint& p) {
  TriangleGeometry g;
  const auto& m = side_axes();
  for (int k = 0; k < 3; ++k) {
    // 1 + m_k.xi >= 0 exactly for |xi| = 1; clamp the roundoff tail.
    g.rho[k] = std::max(0.0, 2.0 * p.spin() * (1.0 + m[k].dot(p.xi())));
  }
  g.area = kHalfSqrt3 * p.spin() * p.xi()[1];
  return g;
}

double shoelace_area(const std::array<Complex, 3>& z) {
  const double x1 = z[0].real(), y1 = z[0].imag();
  const double x2 = z[1].real(), y2 = z[1].imag();
  const double x3 = z[2].real(), y3 = z[2].imag();
  return 0.5 * ((x2 - x1) * (y3 - y1) - (x3 - x1) * (y2 - y1));
}

ModeDecomposition decompose(const GuidingCenterState& state) {
  const std::array<Complex, 3> z = {state.z(0), state.z(1), state.z(2)};
  ModeDecomposition d;
  d.centroid_mode = (z[0] + z[1] + z[2]) / kSqrt3;
  // Rows 1-2 of the mode matrix applied to z equal sqrt(2) * psi; returning
  // the spinor convention keeps psi.norm2() == S.
  d.psi = spinor_from_positions(z);
  return d;
}

std::array<Complex, 3> reconstruct_positions(Complex centroid_mode,
                                             const ShapePoint& p,
                                             double gamma) {
  const Spinor psi = spinor_from_shape(p, gamma);
  const Complex c = centroid_mode / kSqrt3;
  const Complex w2 = psi.c2 / kSqrt3;
  return {c - psi.c1 + w2, c + psi.c1 + w2, c - 2.0 * w2};
}

InvariantSet invariants(const GuidingCenterState& state, const Potential* pot,
                        double omega_c) {
  InvariantSet inv;
  inv.Ty = state.x.sum();
  inv.Tx = state.y.sum();
  inv.J = 0.5 * (state.x.squaredNorm() + state.y.squaredNorm());
  inv.L = (inv.Tx * inv.Tx + inv.Ty * inv.Ty) / 6.0;
  inv.S = inv.J - inv.L;
  double v = 0.0;
  if (pot != nullptr) {
    std::array<Eigen::Vector2d, 3> q;
    for (int i = 0; i < 3; ++i) q[i] = Eigen::Vector2d(state.x[i], state.y[i]);
    v = pot->eval_cartesian(q);
  }
  inv.energy = v + omega_c * inv.J;
  return inv;
}

SpinorAngles spinor_angles(const Spinor& psi, double scale) {
  const double s = psi.norm2();
  if (s < kShapeSizeEpsilon * std::max(scale, 0.0)) {
    raise(ErrorCode::ZeroSizeShape, "spinor norm too small to define chart angles");
  }
  SpinorAngles a;
  a.spin = s;
  const double a1 = std::abs(psi.c1);
  const double a2 = std::abs(psi.c2);
  a.theta = 2.0 * std::atan2(a2, a1);
  if (a1 >= a2) {
    a.patch = 0;
    a.gamma = -std::arg(psi.c1);
    // phi = arg(psi1) - arg(psi2), well conditioned unless psi2 ~ 0 where it
    // is immaterial (multiplied by sin(theta/2) everywhere it is used).
    a.phi = (a2 > 0.0) ? std::arg(psi.c1 * std::conj(psi.c2)) : 0.0;
  } else {
    a.patch = 1;
    a.phi = (a1 > 0.0) ? std::arg(psi.c1 * std::conj(psi.c2)) : 0.0;
    // Second component carries the phase: gamma = -arg(psi2) - phi.
    a.gamma = -std::arg(psi.c2) - a.phi;
  }
  return a;
}

Spinor spinor_from_shape(const ShapePoint& p, double gamma) {
  const Vec3& xi = p.xi();
  const double theta = std::acos(std::clamp(xi[2], -1.0, 1.0));
  const double phi = std::atan2(-xi[1], xi[0]);
  const double r = std::sqrt(p.spin());
  const Complex phase = std::polar(1.0, -gamma);
  Spinor psi;
  psi.c1 = r * std::cos(0.5 * theta) * phase;
  psi.c2 = r * std::sin(0.5 * theta) * phase * std::polar(1.0, -phi);
  return psi;
}

}  // namespace gc3b
