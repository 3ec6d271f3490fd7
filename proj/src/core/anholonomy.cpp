#include "core/anholonomy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/errors.hpp"
#include "core/geometry.hpp"

namespace gc3b {

namespace {

constexpr double kFourPi = 4.0 * kPi;
constexpr double kGaugeCosHalf = 5e-7;  // cos(theta/2) at pi - theta = 1e-6

double wrap_angle(double a) {
  a = std::fmod(a, 2.0 * kPi);
  if (a > kPi) a -= 2.0 * kPi;
  if (a <= -kPi) a += 2.0 * kPi;
  return a;
}

// Branch reduction of a raw accumulated solid angle into [0, 4pi): the area of
// the region enclosed on the left of the traversal, independent of which
// coordinate chart accumulated it.
double reduce_solid_angle(double raw) {
  double y = raw - kFourPi * std::floor(raw / kFourPi);
  if (y >= kFourPi) y -= kFourPi;
  if (kFourPi - y < 1e-9) y = 0.0;  // wraparound roundoff on degenerate loops
  return y;
}

// Left-handed spherical charts indexed by their pole axis p:
// cos(theta) = xi[p], phi = atan2(xi[(p+1) % 3], xi[(p+2) % 3]).
// All three share the same orientation convention, so the reduced solid angle
// is chart-independent.
struct Chart {
  int p = 1;  // default: second Bloch axis, the mirror-symmetry pole
  int iy() const { return (p + 1) % 3; }
  int ix() const { return (p + 2) % 3; }
  double cos_theta(const Vec3& xi) const { return xi[p]; }
  double phi(const Vec3& xi) const { return std::atan2(xi[iy()], xi[ix()]); }
  double sin2_theta(const Vec3& xi) const {
    return xi[ix()] * xi[ix()] + xi[iy()] * xi[iy()];
  }
};

// Picks the default chart unless the curve approaches its poles, in which
// case the chart with the largest clearance wins.
Chart select_chart(const std::vector<OrbitSample>& samples) {
  double best_min = -1.0;
  int best_p = 1;
  for (int p : {1, 0, 2}) {
    Chart c{p};
    double mn = std::numeric_limits<double>::infinity();
    for (const auto& s : samples) mn = std::min(mn, c.sin2_theta(s.xi));
    if (p == 1 && mn > 1e-8) return c;
    if (mn > best_min) {
      best_min = mn;
      best_p = p;
    }
  }
  return Chart{best_p};
}

struct U2Coord {
  double s = 0.0;  // scalar part: element is -i (s + v . sigma)
  Vec3 v = Vec3::Zero();
};

Spinor apply_exp(const U2Coord& w, const Spinor& p) {
  const Complex phase(std::cos(w.s), -std::sin(w.s));
  const double angle = w.v.norm();
  if (angle < 1e-300) return {phase * p.c1, phase * p.c2};
  const Vec3 n = w.v / angle;
  const double c = std::cos(angle), s = std::sin(angle);
  const Complex q1 = n[2] * p.c1 + Complex(n[0], -n[1]) * p.c2;
  const Complex q2 = Complex(n[0], n[1]) * p.c1 - n[2] * p.c2;
  const Complex r1 = c * p.c1 + Complex(0.0, -s) * q1;
  const Complex r2 = c * p.c2 + Complex(0.0, -s) * q2;
  return {phase * r1, phase * r2};
}

// dexpinv on u(2) in these coordinates; the scalar part is central.
Vec3 dexpinv_u2(const Vec3& w, const Vec3& v) {
  return v - w.cross(v) + (1.0 / 3.0) * w.cross(w.cross(v));
}

struct SpinorField {
  const Potential* pot;
  double omega_c;

  U2Coord operator()(const Spinor& psi) const {
    const ShapePoint sp = bloch_from_spinor(psi);
    const ShapeGradient g = pot->grad_shape(sp);
    const double s = sp.spin();
    U2Coord a;
    a.v = g.grad_xi / s;
    a.s = omega_c + g.dV_dS - g.grad_xi.dot(sp.xi()) / s;
    return a;
  }
};

Spinor rkmk4_spinor_step(const SpinorField& field, const Spinor& psi, double h) {
  const U2Coord a1 = field(psi);
  const U2Coord u2{0.5 * h * a1.s, 0.5 * h * a1.v};
  const U2Coord a2 = field(apply_exp(u2, psi));
  const U2Coord k2{a2.s, dexpinv_u2(u2.v, a2.v)};
  const U2Coord u3{0.5 * h * k2.s, 0.5 * h * k2.v};
  const U2Coord a3 = field(apply_exp(u3, psi));
  const U2Coord k3{a3.s, dexpinv_u2(u3.v, a3.v)};
  const U2Coord u4{h * k3.s, h * k3.v};
  const U2Coord a4 = field(apply_exp(u4, psi));
  const U2Coord k4{a4.s, dexpinv_u2(u4.v, a4.v)};
  const U2Coord w{(h / 6.0) * (a1.s + 2.0 * k2.s + 2.0 * k3.s + k4.s),
                  (h / 6.0) * (a1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v)};
  return apply_exp(w, psi);
}

double spinor_distance(const Spinor& a, const Spinor& b) {
  return std::sqrt(std::norm(a.c1 - b.c1) + std::norm(a.c2 - b.c2));
}

// Same error-budget rule as the shape integrator.
double local_tolerance(double tol, double phase) {
  const double budget = std::pow(0.5 * tol / std::max(1.0, phase), 1.25);
  return std::clamp(std::min(budget, 1e-2 * tol), 5e-14, 1e-6);
}

// Largest safe step at psi: caps the algebra rotation per step and, near the
// chart singularities |c1| -> 0 or |c2| -> 0, the swing rate of the component
// phases so that the unwrapping below never slips.
double step_cap(const SpinorField& field, const Spinor& psi, double s0) {
  const U2Coord a = field(psi);
  const double base = std::abs(a.s) + a.v.norm();
  double cap = 0.2 / std::max(base, 1e-300);
  const double n1 = std::norm(psi.c1), n2 = std::norm(psi.c2);
  if (std::min(n1, n2) < 1e-2 * s0) {
    // d/dt c1 = -i[(a0 + a3) c1 + (a1 - i a2) c2], similarly for c2.
    const Complex off(a.v[0], -a.v[1]);
    double rate = base;
    if (n1 > 0.0) {
      rate = std::max(rate, std::abs(Complex(a.s + a.v[2], 0.0) +
                                     off * (psi.c2 / psi.c1)));
    }
    if (n2 > 0.0) {
      rate = std::max(rate, std::abs(Complex(a.s - a.v[2], 0.0) +
                                     std::conj(off) * (psi.c1 / psi.c2)));
    }
    rate = std::min(rate, 1e9 * std::max(base, 1e-300));
    cap = std::min(cap, 0.25 / rate);
  }
  return cap;
}

struct PeriodQuadrature {
  double omega_dyn_avg = 0.0;
  double omega_raw = 0.0;  // raw accumulated solid angle
};

// Integrates omega_dyn and the solid-angle 1-form (1 - cos theta) dphi along
// one period of the shape flow, as order-4 path quadratures of the same
// error-controlled run.
PeriodQuadrature quadrature_over_period(const Potential& pot, double spin,
                                        const Vec3& xi0, double period,
                                        double omega_c, const Chart& chart,
                                        double tol) {
  AxisField axis = [&pot, spin](const Vec3& xi) -> Vec3 {
    return (2.0 / spin) * pot.grad_shape(ShapePoint(spin, xi)).grad_xi;
  };
  PathIntegrand f_dyn = [&pot, spin, omega_c](const Vec3& xi) {
    return omega_c + pot.grad_shape(ShapePoint(spin, xi)).dV_dS;
  };
  PathIntegrand f_area = [&pot, spin, chart](const Vec3& xi) {
    const Vec3 v = ((2.0 / spin) * pot.grad_shape(ShapePoint(spin, xi)).grad_xi)
                       .cross(xi);
    const double x = xi[chart.ix()], y = xi[chart.iy()];
    const double s2 = x * x + y * y;
    const double phi_dot = (v[chart.iy()] * x - y * v[chart.ix()]) /
                           std::max(s2, 1e-300);
    return (1.0 - xi[chart.p]) * phi_dot;
  };
  double omega_max = axis(xi0).norm();
  AdaptiveOptions opt;
  opt.tol = local_tolerance(tol, period * omega_max);
  SphereFlow flow(axis, {f_dyn, f_area}, xi0, 0.0, opt);
  while (flow.current().t < period) {
    if (flow.advance(period) == 0.0) break;
  }
  PeriodQuadrature out;
  out.omega_dyn_avg = flow.current().quad[0] / period;
  out.omega_raw = flow.current().quad[1];
  return out;
}

}  // namespace

double dynamical_frequency(const Potential& pot, const ShapePoint& p,
                           double omega_c) {
  return omega_c + pot.grad_shape(p).dV_dS;
}

SpinorTrajectory integrate_spinor(const Potential& pot, const Spinor& psi0,
                                  double omega_c, double t_end, double tol) {
  if (!(t_end > 0.0)) raise(ErrorCode::InvalidArgument, "t_end must be positive");
  if (!(tol > 0.0)) raise(ErrorCode::InvalidArgument, "tolerance must be positive");
  const double s0 = psi0.norm2();
  (void)bloch_from_spinor(psi0);  // validates the size threshold
  const SpinorField field{&pot, omega_c};

  SpinorTrajectory traj;
  traj.spin = s0;

  const double rate0 = [&] {
    const U2Coord a = field(psi0);
    return std::abs(a.s) + a.v.norm();
  }();
  const double local_tol = local_tolerance(tol, t_end * std::max(rate0, 1e-300));

  Spinor psi = psi0;
  double t = 0.0;
  double gamma = (std::norm(psi.c1) > 0.0) ? -std::arg(psi.c1) : 0.0;
  double phi = (std::norm(psi.c2) > 0.0 && std::norm(psi.c1) > 0.0)
                   ? std::arg(psi.c1) - std::arg(psi.c2)
                   : 0.0;
  auto push_sample = [&](double time, const Spinor& ps) {
    SpinorSample smp;
    smp.t = time;
    smp.psi = ps;
    const ShapePoint sp = bloch_from_spinor(ps);
    smp.xi = sp.xi();
    smp.theta = std::acos(std::clamp(smp.xi[2], -1.0, 1.0));
    smp.gamma = gamma;
    smp.phi = phi;
    traj.samples.push_back(smp);
    if (std::norm(ps.c1) < kGaugeCosHalf * kGaugeCosHalf * s0) {
      traj.gauge_singularity = true;
    }
    traj.max_norm_drift =
        std::max(traj.max_norm_drift, std::abs(ps.norm2() - s0) / s0);
  };
  push_sample(0.0, psi);

  double h = 0.0;
  while (t < t_end) {
    double cap = std::min(step_cap(field, psi, s0), t_end - t);
    if (h <= 0.0) h = cap;
    h = std::min(h, cap);
    for (;;) {
      const Spinor full = rkmk4_spinor_step(field, psi, h);
      const Spinor half = rkmk4_spinor_step(field, psi, 0.5 * h);
      const Spinor fine = rkmk4_spinor_step(field, half, 0.5 * h);
      const double err = spinor_distance(full, fine) / std::sqrt(s0);
      if (err <= local_tol) {
        const double d1 = (std::norm(fine.c1) > 0.0 && std::norm(psi.c1) > 0.0)
                              ? std::arg(fine.c1 * std::conj(psi.c1))
                              : 0.0;
        const double d2 = (std::norm(fine.c2) > 0.0 && std::norm(psi.c2) > 0.0)
                              ? std::arg(fine.c2 * std::conj(psi.c2))
                              : 0.0;
        gamma -= d1;
        phi += d1 - d2;
        psi = fine;
        t += h;
        // Absorb terminal roundoff: a residual far below the accepted step is
        // accumulation error, and retrying it can stall one ulp short of the
        // endpoint forever.
        if (t_end - t < 1e-10 * h) t = t_end;
        push_sample(t, psi);
        h *= (err == 0.0)
                 ? 5.0
                 : std::min(5.0, 0.9 * std::pow(local_tol / err, 0.2));
        break;
      }
      h *= std::max(0.1, 0.9 * std::pow(local_tol / err, 0.2));
      if (h < 1e-14 * std::max(1.0, std::abs(t)) || h < 1e-280) {
        raise(ErrorCode::StepFailure, "spinor step size underflow");
      }
    }
  }
  return traj;
}

double solid_angle(const OrbitRecord& orbit) {
  if (orbit.classification == OrbitClass::FixedPoint) return 0.0;
  if (orbit.classification != OrbitClass::Periodic) {
    raise(ErrorCode::NotClosed, "orbit is not classified as periodic");
  }
  const auto& s = orbit.samples;
  if (s.size() < 2) return 0.0;
  if ((s.front().xi - s.back().xi).norm() > 1e-3) {
    raise(ErrorCode::NotClosed, "orbit endpoints do not close onto each other");
  }
  const Chart chart = select_chart(s);
  double raw = 0.0;
  double phi_prev = chart.phi(s.front().xi);
  double cos_prev = chart.cos_theta(s.front().xi);
  auto accumulate = [&](const Vec3& xi) {
    const double phi = chart.phi(xi);
    const double cth = chart.cos_theta(xi);
    raw += (1.0 - 0.5 * (cos_prev + cth)) * wrap_angle(phi - phi_prev);
    phi_prev = phi;
    cos_prev = cth;
  };
  for (std::size_t i = 1; i < s.size(); ++i) accumulate(s[i].xi);
  accumulate(s.front().xi);  // close the polygon exactly
  return reduce_solid_angle(raw);
}

AnholonomyReport report(const Potential& pot, const ShapePoint& p0,
                        double omega_c, double tol) {
  if (!(tol > 0.0)) raise(ErrorCode::InvalidArgument, "tolerance must be positive");
  AnholonomyReport rep;
  rep.spin = p0.spin();
  rep.energy = pot.eval_shape(p0);
  if (is_fixed_point_input(pot, p0)) {
    rep.fixed_point = true;
    rep.T_s = std::numeric_limits<double>::quiet_NaN();
    rep.omega_dyn_avg = dynamical_frequency(pot, p0, omega_c);
    rep.omega_r = rep.omega_dyn_avg;
    return rep;
  }
  const double period_tol = std::clamp(1e-2 * tol, 1e-12, 1e-9);
  PeriodResult pr = find_period(pot, p0, period_tol);
  rep.T_s = pr.period;

  const Chart chart = select_chart(pr.orbit.samples);
  const PeriodQuadrature q = quadrature_over_period(
      pot, rep.spin, p0.xi(), pr.period, omega_c, chart, period_tol);
  rep.omega_dyn_avg = q.omega_dyn_avg;
  rep.Omega = reduce_solid_angle(q.omega_raw);
  rep.omega_geo = -rep.Omega / (2.0 * rep.T_s);
  rep.omega_r = rep.omega_dyn_avg + rep.omega_geo;
  rep.I_s = rep.spin * rep.Omega / kFourPi;

  const Spinor psi0 = spinor_from_shape(p0, 0.0);
  const SpinorTrajectory straj =
      integrate_spinor(pot, psi0, omega_c, pr.period, std::min(1e-2 * tol, 1e-8));
  rep.delta_gamma_direct =
      straj.samples.back().gamma - straj.samples.front().gamma;
  rep.gauge_singularity = straj.gauge_singularity;

  const double mismatch = wrap_angle(rep.delta_gamma_direct - rep.omega_r * rep.T_s);
  if (std::abs(mismatch) > tol) {
    raise(ErrorCode::StepFailure,
          "phase-decomposition self-test failed: direct spinor phase and "
          "frequency split disagree beyond tolerance");
  }
  return rep;
}

double shape_action(const Potential& pot, double spin, double energy,
                    const std::optional<Vec3>& hint) {
  if (!(spin > 0.0)) raise(ErrorCode::InvalidArgument, "spin must be positive");
  Vec3 h = hint.value_or(Vec3(0.0, 1.0, 0.0));
  if (h.norm() < 1e-300) raise(ErrorCode::InvalidArgument, "hint must be nonzero");
  h.normalize();

  const std::vector<Vec3> pts = level_set_points(pot, spin, energy);
  if (pts.empty()) {
    for (const auto& fp : fixed_points(pot, spin)) {
      if (std::isfinite(fp.value) &&
          std::abs(fp.value - energy) <= 1e-9 * std::max(1.0, std::abs(energy))) {
        return 0.0;  // level curve degenerated to the critical point
      }
    }
    raise(ErrorCode::EmptyLevelSet,
          "no level curve at the requested energy for this spin");
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if ((pts[i] - h).norm() < (pts[best] - h).norm()) best = i;
  }
  const ShapePoint p0(spin, pts[best]);
  if (is_fixed_point_input(pot, p0)) {
    raise(ErrorCode::FixedPointInput,
          "level curve at this energy consists of fixed points");
  }
  PeriodResult pr = find_period(pot, p0, 1e-9);
  const Chart chart = select_chart(pr.orbit.samples);
  const PeriodQuadrature q = quadrature_over_period(pot, spin, p0.xi(),
                                                    pr.period, 0.0, chart, 1e-9);
  return spin * reduce_solid_angle(q.omega_raw) / kFourPi;
}

}  // namespace gc3b
