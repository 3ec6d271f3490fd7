#include "core/sphere_ode.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"

namespace gc3b {

Vec3 rotate_about(const Vec3& w, const Vec3& v) {
  const double theta = w.norm();
  if (theta < 1e-9) {
    // Series accurate to O(theta^3): below 1e-9 the truncation is < 1e-27.
    const Vec3 wv = w.cross(v);
    return v + wv + 0.5 * w.cross(wv);
  }
  const Vec3 n = w / theta;
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return c * v + s * n.cross(v) + (1.0 - c) * n.dot(v) * n;
}

Vec3 dexpinv_so3(const Vec3& w, const Vec3& v) {
  const Vec3 wv = w.cross(v);
  return v - 0.5 * wv + (1.0 / 12.0) * w.cross(wv);
}

SphereStepOut rkmk4_sphere_step(const AxisField& axis,
                                const std::vector<PathIntegrand>& quads,
                                const Vec3& xi, double h) {
  const Vec3 k1 = axis(xi);

  const Vec3 u2 = (0.5 * h) * k1;
  const Vec3 xi2 = rotate_about(u2, xi);
  const Vec3 k2 = dexpinv_so3(u2, axis(xi2));

  const Vec3 u3 = (0.5 * h) * k2;
  const Vec3 xi3 = rotate_about(u3, xi);
  const Vec3 k3 = dexpinv_so3(u3, axis(xi3));

  const Vec3 u4 = h * k3;
  const Vec3 xi4 = rotate_about(u4, xi);
  const Vec3 k4 = dexpinv_so3(u4, axis(xi4));

  SphereStepOut out;
  out.xi = rotate_about((h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4), xi);
  out.quad.resize(quads.size());
  for (std::size_t i = 0; i < quads.size(); ++i) {
    out.quad[i] = (h / 6.0) * (quads[i](xi) + 2.0 * quads[i](xi2) +
                               2.0 * quads[i](xi3) + quads[i](xi4));
  }
  return out;
}

SphereFlow::SphereFlow(AxisField axis, std::vector<PathIntegrand> quads,
                       const Vec3& xi0, double t0, const AdaptiveOptions& opt)
    : axis_(std::move(axis)), quads_(std::move(quads)), opt_(opt) {
  if (!(opt_.tol > 0.0)) raise(ErrorCode::InvalidArgument, "tolerance must be positive");
  cur_.t = t0;
  cur_.xi = xi0;
  cur_.quad.assign(quads_.size(), 0.0);
  prev_ = cur_;
  if (opt_.h_init > 0.0) {
    h_ = opt_.h_init;
  } else {
    const double rate = axis_(xi0).cross(xi0).norm();
    h_ = (rate > 1e-300) ? 0.05 / rate : 1.0;
  }
  h_ = std::min(h_, opt_.h_max);
}

SphereStepOut SphereFlow::controlled_step(const Vec3& xi, double h) const {
  // Two half steps; caller compares against one full step for the error
  // estimate and accepts this (more accurate) result.
  const SphereStepOut a = rkmk4_sphere_step(axis_, quads_, xi, 0.5 * h);
  SphereStepOut b = rkmk4_sphere_step(axis_, quads_, a.xi, 0.5 * h);
  for (std::size_t i = 0; i < b.quad.size(); ++i) b.quad[i] += a.quad[i];
  return b;
}

double SphereFlow::advance(double t_cap) {
  const double remaining = t_cap - cur_.t;
  if (remaining <= 0.0) return 0.0;
  double h = std::min({h_, opt_.h_max, remaining});
  const double rate = axis_(cur_.xi).norm();
  if (rate > 1e-300) h = std::min(h, opt_.max_rotation / rate);
  for (;;) {
    if (++steps_ > opt_.max_steps) {
      raise(ErrorCode::StepFailure, "step budget exhausted");
    }
    const SphereStepOut full = rkmk4_sphere_step(axis_, quads_, cur_.xi, h);
    const SphereStepOut fine = controlled_step(cur_.xi, h);
    const double err = (full.xi - fine.xi).norm();
    if (err <= opt_.tol) {
      prev_ = cur_;
      cur_.t += h;
      cur_.xi = fine.xi;
      for (std::size_t i = 0; i < quads_.size(); ++i) cur_.quad[i] += fine.quad[i];
      const double grow =
          (err > 0.0) ? std::min(5.0, 0.9 * std::pow(opt_.tol / err, 0.2)) : 5.0;
      h_ = std::min(h * grow, opt_.h_max);
      return h;
    }
    const double shrink = std::max(0.1, 0.9 * std::pow(opt_.tol / err, 0.2));
    h *= shrink;
    if (h < 1e-14 * std::max(1.0, std::abs(cur_.t)) || h < 1e-280) {
      raise(ErrorCode::StepFailure, "error control drove the step size to zero");
    }
  }
}

FlowSample SphereFlow::eval_between(double t) const {
  if (t <= prev_.t) return prev_;
  if (t >= cur_.t) return cur_;
  // Re-integrate the partial interval from the previous accepted state with
  // two half steps, matching the accuracy of accepted steps.
  const double h = t - prev_.t;
  const SphereStepOut out = controlled_step(prev_.xi, h);
  FlowSample s;
  s.t = t;
  s.xi = out.xi;
  s.quad = prev_.quad;
  for (std::size_t i = 0; i < quads_.size(); ++i) s.quad[i] += out.quad[i];
  return s;
}

}  // namespace gc3b
