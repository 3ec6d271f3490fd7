#include "core/shape_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <utility>

#include "core/errors.hpp"
#include "core/geometry.hpp"

namespace gc3b {

namespace {

constexpr double kFixedPointRatio = 1e-12;
constexpr double kPeriodBudgetFactor = 1e6;  // characteristic times
constexpr double kInf = std::numeric_limits<double>::infinity();

AxisField make_axis(const Potential* pot, double spin) {
  return [pot, spin](const Vec3& xi) -> Vec3 {
    return (2.0 / spin) * pot->grad_shape(ShapePoint(spin, xi)).grad_xi;
  };
}

double energy_denom(double v0) { return std::max(std::abs(v0), 1e-300); }

// Local per-step tolerance sized so that the accumulated error over a run of
// total rotation `phase` stays a comfortable factor below `tol`
// (per-step error eps and step count ~ phase/eps^{1/5} give a global error
// ~ phase * eps^{4/5}).
double local_tolerance(double tol, double phase) {
  const double budget = std::pow(0.5 * tol / std::max(1.0, phase), 1.25);
  return std::clamp(std::min(budget, 1e-2 * tol), 5e-14, 1e-6);
}

double wrap_angle(double a) {
  while (a > kPi) a -= 2.0 * kPi;
  while (a <= -kPi) a += 2.0 * kPi;
  return a;
}

struct PeriodScan {
  bool found = false;
  double period = 0.0;
  double omega_max = 0.0;
};

// Runs the flow from xi0 watching for same-direction returns to the section
// {xi : n.(xi - xi0) = 0}; each candidate crossing is refined in time and
// accepted only if the state actually closes onto xi0.
PeriodScan scan_for_period(const AxisField& axis, const Vec3& xi0, const Vec3& n,
                           const Vec3& v0, double local_tol, double max_rotation,
                           double closure_tol, double t_budget, OrbitRecord* rec,
                           const Potential* pot, double spin) {
  AdaptiveOptions opt;
  opt.tol = local_tol;
  opt.max_rotation = max_rotation;
  SphereFlow flow(axis, {}, xi0, 0.0, opt);
  const double g0 = n.dot(xi0);
  PeriodScan out;
  out.omega_max = axis(xi0).norm();
  double v0ref = 0.0;
  if (rec) {
    rec->samples.push_back({0.0, xi0});
    v0ref = rec->energy;
  }
  int refinements = 0;
  while (flow.current().t < t_budget) {
    flow.advance(t_budget);
    const FlowSample& prev = flow.previous();
    const FlowSample& cur = flow.current();
    out.omega_max = std::max(out.omega_max, axis(cur.xi).norm());
    if (rec) {
      rec->samples.push_back({cur.t, cur.xi});
      rec->max_norm_drift =
          std::max(rec->max_norm_drift, std::abs(cur.xi.norm() - 1.0));
      const double v = pot->eval_shape(ShapePoint(spin, cur.xi));
      rec->max_energy_drift = std::max(rec->max_energy_drift,
                                       std::abs(v - v0ref) / energy_denom(v0ref));
    }
    const double gp = n.dot(prev.xi) - g0;
    const double gc = n.dot(cur.xi) - g0;
    if (!(prev.t > 0.0 && gp < 0.0 && gc >= 0.0)) continue;
    if (++refinements > 256) break;
    // Bisection with secant acceleration inside the bracketing step.
    double ta = prev.t, tb = cur.t, fa = gp, fb = gc;
    const double eps_t =
        std::max(1e-14 * tb, 0.02 * closure_tol / std::max(v0.norm(), 1e-300));
    for (int it = 0; it < 100 && (tb - ta) > eps_t; ++it) {
      double tm = tb - fb * (tb - ta) / (fb - fa);  // secant
      const double lo = ta + 0.1 * (tb - ta);
      const double hi = tb - 0.1 * (tb - ta);
      if (!(tm >= lo && tm <= hi)) tm = 0.5 * (ta + tb);
      const FlowSample sm = flow.eval_between(tm);
      const double fm = n.dot(sm.xi) - g0;
      if (fm < 0.0) {
        ta = tm;
        fa = fm;
      } else {
        tb = tm;
        fb = fm;
      }
    }
    const FlowSample hit = flow.eval_between(tb);
    const Vec3 vh = axis(hit.xi).cross(hit.xi);
    if (vh.dot(v0) <= 0.0) continue;  // opposite-direction crossing
    if ((hit.xi - xi0).norm() > closure_tol) continue;  // different lobe: keep going
    out.found = true;
    out.period = tb;
    if (rec) {
      while (!rec->samples.empty() && rec->samples.back().t > tb) {
        rec->samples.pop_back();
      }
      rec->samples.push_back({tb, hit.xi});
    }
    return out;
  }
  return out;
}

PeriodResult find_period_impl(const Potential& pot, const ShapePoint& p0,
                              double tol, double budget_factor,
                              double max_rotation) {
  if (!(tol > 0.0)) raise(ErrorCode::InvalidArgument, "tolerance must be positive");
  const double spin = p0.spin();
  const Vec3 xi0 = p0.xi();
  AxisField axis = make_axis(&pot, spin);
  const Vec3 a0 = axis(xi0);
  const Vec3 v0 = a0.cross(xi0);
  if (v0.norm() <= kFixedPointRatio * a0.norm()) {
    raise(ErrorCode::FixedPointInput,
          "initial shape is a fixed point of the shape flow");
  }
  const Vec3 n = v0.normalized();
  const double w0 = std::max(a0.norm(), v0.norm());
  const double t_budget = budget_factor / w0;

  // Coarse pass: estimate the period and the peak rotation rate.
  const PeriodScan coarse = scan_for_period(axis, xi0, n, v0, 1e-9, max_rotation,
                                            5e-3, t_budget, nullptr, &pot, spin);
  if (!coarse.found) {
    raise(ErrorCode::NoReturn,
          "orbit did not return to the section within the time budget "
          "(separatrix suspect)");
  }

  // Strict pass: error budget sized to the now-known period.
  const double lt = local_tolerance(tol, coarse.period * coarse.omega_max);
  OrbitRecord orbit;
  orbit.spin = spin;
  orbit.energy = pot.eval_shape(p0);
  const PeriodScan strict = scan_for_period(axis, xi0, n, v0, lt, max_rotation,
                                            10.0 * tol, t_budget, &orbit, &pot,
                                            spin);
  if (!strict.found) {
    raise(ErrorCode::NoReturn,
          "orbit failed to close onto the initial shape within tolerance");
  }
  orbit.period = strict.period;
  orbit.classification = OrbitClass::Periodic;
  return {strict.period, std::move(orbit)};
}

// ---- fixed points ----------------------------------------------------------

struct NewtonOutcome {
  bool ok = false;
  Vec3 xi = Vec3::UnitZ();
  double residual = kInf;
};

NewtonOutcome newton_critical(const Potential& pot, double spin, Vec3 xi,
                              double gscale) {
  const double res_target = 1e-13 * std::max(gscale, 1e-300);
  NewtonOutcome best;
  best.xi = xi;
  for (int it = 0; it < 80; ++it) {
    Vec3 g;
    try {
      g = pot.grad_shape(ShapePoint(spin, xi)).grad_xi;
    } catch (const Error&) {
      break;
    }
    const Vec3 t1 = xi.unitOrthogonal();
    const Vec3 t2 = xi.cross(t1);
    const Eigen::Vector2d r(g.dot(t1), g.dot(t2));
    if (r.norm() < best.residual) {
      best.residual = r.norm();
      best.xi = xi;
    }
    if (r.norm() <= res_target) {
      best.ok = true;
      return best;
    }
    const double h = 1e-7;
    Eigen::Matrix2d jac;
    try {
      for (int j = 0; j < 2; ++j) {
        const Vec3 tj = (j == 0) ? t1 : t2;
        const Vec3 gp = pot.grad_shape(ShapePoint(spin, (xi + h * tj).normalized())).grad_xi;
        const Vec3 gm = pot.grad_shape(ShapePoint(spin, (xi - h * tj).normalized())).grad_xi;
        const Vec3 dg = (gp - gm) / (2.0 * h);
        jac(0, j) = dg.dot(t1);
        jac(1, j) = dg.dot(t2);
      }
    } catch (const Error&) {
      break;
    }
    // Damped Gauss-Newton; tolerates the rank-1 Jacobians of degenerate
    // critical circles.
    const Eigen::Matrix2d jtj = jac.transpose() * jac;
    const double mu = 1e-10 * jtj.trace() + 1e-300;
    Eigen::Vector2d delta =
        (jtj + mu * Eigen::Matrix2d::Identity()).ldlt().solve(-jac.transpose() * r);
    if (!delta.allFinite()) break;
    const double dn = delta.norm();
    if (dn > 0.3) delta *= 0.3 / dn;
    xi = (xi + delta(0) * t1 + delta(1) * t2).normalized();
  }
  best.ok = best.residual <= 1e-11 * std::max(gscale, 1e-300);
  return best;
}

struct RingInfo {
  Stability stability = Stability::Degenerate;
  double mean_angular_rate = 0.0;  // mean |v| / ring radius
};

RingInfo ring_classify(const AxisField& axis, const Vec3& p) {
  const double eps = 1e-4;
  const int n = 64;
  const Vec3 t1 = p.unitOrthogonal();
  const Vec3 t2 = p.cross(t1);
  const double ce = std::cos(eps), se = std::sin(eps);
  double total = 0.0, prev = 0.0, first = 0.0, speed_sum = 0.0, wmax = 0.0;
  for (int i = 0; i < n; ++i) {
    const double alpha = 2.0 * kPi * i / n;
    const Vec3 xi = ce * p + se * (std::cos(alpha) * t1 + std::sin(alpha) * t2);
    const Vec3 v = axis(xi).cross(xi);
    const Eigen::Vector2d w(v.dot(t1), v.dot(t2));
    const double angle = std::atan2(w(1), w(0));
    if (i == 0) {
      first = angle;
    } else {
      total += wrap_angle(angle - prev);
    }
    prev = angle;
    speed_sum += w.norm();
    wmax = std::max(wmax, w.norm());
  }
  total += wrap_angle(first - prev);
  RingInfo info;
  info.mean_angular_rate = speed_sum / n / eps;
  if (wmax < 1e-300) return info;  // neighborhood entirely stationary
  const long winding = std::lround(total / (2.0 * kPi));
  if (winding == 1) {
    info.stability = Stability::Elliptic;
  } else if (winding == -1) {
    info.stability = Stability::Hyperbolic;
  }
  return info;
}

double linear_rate(const AxisField& axis, const Vec3& p, Stability stab) {
  const double h = 1e-6;
  const Vec3 t1 = p.unitOrthogonal();
  const Vec3 t2 = p.cross(t1);
  Eigen::Matrix2d m;
  for (int j = 0; j < 2; ++j) {
    const Vec3 tj = (j == 0) ? t1 : t2;
    const Vec3 xp = (p + h * tj).normalized();
    const Vec3 xm = (p - h * tj).normalized();
    const Vec3 dv = (axis(xp).cross(xp) - axis(xm).cross(xm)) / (2.0 * h);
    m(0, j) = dv.dot(t1);
    m(1, j) = dv.dot(t2);
  }
  const double det = m.determinant();
  if (stab == Stability::Hyperbolic) return std::sqrt(std::max(-det, 0.0));
  return std::sqrt(std::abs(det));
}

// ---- icosahedral meshes ----------------------------------------------------

struct Mesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> faces;
  std::vector<std::pair<int, int>> edges;  // sorted pairs, deduplicated
};

Mesh icosphere(int subdivisions) {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  Mesh mesh;
  const double raw[12][3] = {
      {-1, phi, 0}, {1, phi, 0},  {-1, -phi, 0}, {1, -phi, 0},
      {0, -1, phi}, {0, 1, phi},  {0, -1, -phi}, {0, 1, -phi},
      {phi, 0, -1}, {phi, 0, 1},  {-phi, 0, -1}, {-phi, 0, 1}};
  for (const auto& r : raw) mesh.vertices.push_back(Vec3(r[0], r[1], r[2]).normalized());
  mesh.faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (int s = 0; s < subdivisions; ++s) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      const int idx = static_cast<int>(mesh.vertices.size());
      mesh.vertices.push_back((mesh.vertices[a] + mesh.vertices[b]).normalized());
      midpoint.emplace(key, idx);
      return idx;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(mesh.faces.size() * 4);
    for (const auto& f : mesh.faces) {
      const int ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
      next.push_back({f[0], ab, ca});
      next.push_back({f[1], bc, ab});
      next.push_back({f[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    mesh.faces = std::move(next);
  }
  std::map<std::pair<int, int>, bool> seen;
  for (const auto& f : mesh.faces) {
    for (int e = 0; e < 3; ++e) {
      const auto key = std::minmax(f[e], f[(e + 1) % 3]);
      if (!seen.emplace(key, true).second) continue;
      mesh.edges.push_back(key);
    }
  }
  return mesh;
}

Vec3 slerp(const Vec3& a, const Vec3& b, double t) {
  const double ang = std::acos(std::clamp(a.dot(b), -1.0, 1.0));
  if (ang < 1e-12) return a;
  return (std::sin((1.0 - t) * ang) * a + std::sin(t * ang) * b) / std::sin(ang);
}

}  // namespace

Vec3 shape_axis(const Potential& pot, const ShapePoint& p) {
  return (2.0 / p.spin()) * pot.grad_shape(p).grad_xi;
}

Vec3 shape_velocity(const Potential& pot, const ShapePoint& p) {
  return shape_axis(pot, p).cross(p.xi());
}

bool is_fixed_point_input(const Potential& pot, const ShapePoint& p) {
  const Vec3 a = shape_axis(pot, p);
  return a.cross(p.xi()).norm() <= kFixedPointRatio * a.norm();
}

OrbitRecord integrate_shape(const Potential& pot, const ShapePoint& p0,
                            double t_end, double tol, int sample_stride) {
  if (!(t_end > 0.0)) raise(ErrorCode::InvalidArgument, "t_end must be positive");
  if (!(tol > 0.0)) raise(ErrorCode::InvalidArgument, "tolerance must be positive");
  if (sample_stride < 1) raise(ErrorCode::InvalidArgument, "sample stride must be >= 1");
  const double spin = p0.spin();
  const Vec3 xi0 = p0.xi();
  OrbitRecord rec;
  rec.spin = spin;
  rec.energy = pot.eval_shape(p0);
  if (is_fixed_point_input(pot, p0)) {
    rec.classification = OrbitClass::FixedPoint;
    rec.samples = {{0.0, xi0}, {t_end, xi0}};
    return rec;
  }
  AxisField axis = make_axis(&pot, spin);
  const double w0 = axis(xi0).norm();
  AdaptiveOptions opt;
  opt.tol = local_tolerance(tol, t_end * std::max(w0, 1e-300));
  SphereFlow flow(axis, {}, xi0, 0.0, opt);
  rec.samples.push_back({0.0, xi0});
  long idx = 0;
  while (flow.current().t < t_end) {
    flow.advance(t_end);
    const FlowSample& s = flow.current();
    ++idx;
    rec.max_norm_drift = std::max(rec.max_norm_drift, std::abs(s.xi.norm() - 1.0));
    const double v = pot.eval_shape(ShapePoint(spin, s.xi));
    rec.max_energy_drift = std::max(
        rec.max_energy_drift, std::abs(v - rec.energy) / energy_denom(rec.energy));
    if (idx % sample_stride == 0 || s.t >= t_end) rec.samples.push_back({s.t, s.xi});
  }
  rec.classification = OrbitClass::Truncated;
  if (rec.max_energy_drift > tol) {
    raise(ErrorCode::StepFailure, "energy drift exceeded the requested tolerance");
  }
  return rec;
}

PeriodResult find_period(const Potential& pot, const ShapePoint& p0, double tol) {
  return find_period_impl(pot, p0, tol, kPeriodBudgetFactor, 0.1);
}

const std::vector<Vec3>& icosahedral_grid() {
  static const std::vector<Vec3> grid = icosphere(1).vertices;  // 12 + 30
  return grid;
}

std::vector<FixedPointReport> fixed_points(const Potential& pot, double spin) {
  if (!(spin > 0.0)) raise(ErrorCode::InvalidArgument, "spin must be positive");
  AxisField axis = make_axis(&pot, spin);

  std::vector<Vec3> seeds;
  seeds.push_back(Vec3(0, 1, 0));
  seeds.push_back(Vec3(0, -1, 0));
  for (const Vec3& m : side_axes()) {
    seeds.push_back(m);
    seeds.push_back(-m);
  }
  for (const Vec3& g : icosahedral_grid()) seeds.push_back(g);

  double gscale = 0.0;
  for (const Vec3& s : seeds) {
    try {
      gscale = std::max(gscale, pot.grad_shape(ShapePoint(spin, s)).grad_xi.norm());
    } catch (const Error&) {
    }
  }
  if (gscale < 1e-300) return {};  // gradient vanishes identically: shape frozen

  std::vector<FixedPointReport> out;
  auto add_point = [&out](const FixedPointReport& rep) {
    for (auto& existing : out) {
      if ((existing.xi_star - rep.xi_star).norm() < 1e-6) {
        if (rep.residual < existing.residual) existing = rep;
        return;
      }
    }
    out.push_back(rep);
  };

  for (const Vec3& seed : seeds) {
    bool singular_seed = false;
    try {
      (void)pot.grad_shape(ShapePoint(spin, seed));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::SingularConfiguration) continue;
      singular_seed = true;
    }
    if (singular_seed) {
      // Two coincident vertices. For divergent interactions this is an energy
      // singularity; for integrable ones (exponents in (0,1)) the velocity
      // still vanishes at the point by the isotropy symmetry and nearby
      // orbits are classified from a small ring.
      FixedPointReport rep;
      rep.xi_star = seed;
      rep.residual = 0.0;
      if (pot.has_singular_terms()) {
        rep.stability = Stability::Singular;
        double gmin = 0.0, lmin = kInf;
        for (const auto& term : pot.terms()) {
          if (term.lambda < lmin) {
            lmin = term.lambda;
            gmin = term.g;
          }
        }
        rep.value = (gmin >= 0.0) ? kInf : -kInf;
        rep.rate = 0.0;
      } else {
        rep.value = pot.eval_shape(ShapePoint(spin, seed));
        const RingInfo ri = ring_classify(axis, seed);
        rep.stability = ri.stability;
        rep.rate = ri.mean_angular_rate;
      }
      add_point(rep);
      continue;
    }
    const NewtonOutcome noc = newton_critical(pot, spin, seed, gscale);
    if (!noc.ok) continue;
    FixedPointReport rep;
    rep.xi_star = noc.xi;
    rep.residual = noc.residual;
    rep.value = pot.eval_shape(ShapePoint(spin, noc.xi));
    const RingInfo ri = ring_classify(axis, noc.xi);
    rep.stability = ri.stability;
    try {
      rep.rate = linear_rate(axis, noc.xi, rep.stability);
    } catch (const Error&) {
      rep.rate = ri.mean_angular_rate;
    }
    add_point(rep);
  }

  std::sort(out.begin(), out.end(), [](const FixedPointReport& a, const FixedPointReport& b) {
    if (a.value != b.value) return a.value < b.value;
    if (a.xi_star.x() != b.xi_star.x()) return a.xi_star.x() < b.xi_star.x();
    if (a.xi_star.y() != b.xi_star.y()) return a.xi_star.y() < b.xi_star.y();
    return a.xi_star.z() < b.xi_star.z();
  });
  return out;
}

std::vector<Vec3> level_set_points(const Potential& pot, double spin, double energy) {
  static const Mesh mesh = icosphere(2);  // 162 vertices
  std::vector<double> values(mesh.vertices.size());
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    try {
      values[i] = pot.eval_shape(ShapePoint(spin, mesh.vertices[i]));
    } catch (const Error&) {
      values[i] = std::numeric_limits<double>::quiet_NaN();
    }
  }
  std::vector<Vec3> points;
  for (const auto& [ia, ib] : mesh.edges) {
    const double fa = values[ia] - energy;
    const double fb = values[ib] - energy;
    if (!std::isfinite(fa) || !std::isfinite(fb)) continue;
    if (fa == 0.0) {
      points.push_back(mesh.vertices[ia]);
      continue;
    }
    if (fa * fb >= 0.0) continue;
    Vec3 a = mesh.vertices[ia], b = mesh.vertices[ib];
    double va = fa;
    for (int it = 0; it < 60; ++it) {
      const Vec3 m = slerp(a, b, 0.5).normalized();
      double vm;
      try {
        vm = pot.eval_shape(ShapePoint(spin, m)) - energy;
      } catch (const Error&) {
        break;
      }
      if ((vm < 0.0) == (va < 0.0)) {
        a = m;
        va = vm;
      } else {
        b = m;
      }
    }
    points.push_back(slerp(a, b, 0.5).normalized());
  }
  return points;
}

PortraitSet portrait(const Potential& pot, double spin,
                     const std::vector<double>& energies, int resolution) {
  if (resolution < 16) raise(ErrorCode::InvalidArgument, "resolution must be >= 16");
  if (!(spin > 0.0)) raise(ErrorCode::InvalidArgument, "spin must be positive");

  const std::vector<FixedPointReport> fps = fixed_points(pot, spin);
  if (fps.empty()) {
    raise(ErrorCode::EmptyLevelSet,
          "the shape gradient vanishes identically; level curves are undefined");
  }
  double vmin = kInf, vmax = -kInf;
  for (const auto& fp : fps) {
    if (fp.stability == Stability::Singular) {
      (fp.value > 0.0 ? vmax : vmin) = fp.value;
    } else {
      vmin = std::min(vmin, fp.value);
      vmax = std::max(vmax, fp.value);
    }
  }
  const double vspan = std::max(std::abs(vmin) + std::abs(vmax), 1e-300);
  for (const double e : energies) {
    if (e < vmin - 1e-12 * vspan || e > vmax + 1e-12 * vspan) {
      raise(ErrorCode::EmptyLevelSet,
            "requested energy lies outside the range of the potential on the sphere");
    }
  }

  const double max_rot = std::min(0.1, 2.0 * kPi / resolution);
  AxisField axis = make_axis(&pot, spin);
  PortraitSet set;
  set.spin = spin;
  for (const double e : energies) {
    // Level curves shrinking onto a critical point are reported as degenerate
    // single-point curves: fixed-point data for extrema, separatrix flags for
    // saddle energies.
    for (const auto& fp : fps) {
      if (!std::isfinite(fp.value)) continue;
      if (std::abs(fp.value - e) > 1e-9 * std::max(1.0, std::abs(e))) continue;
      PortraitCurve curve;
      curve.energy = e;
      curve.samples = {{0.0, fp.xi_star}};
      curve.classification = (fp.stability == Stability::Hyperbolic)
                                 ? OrbitClass::SeparatrixSuspect
                                 : OrbitClass::FixedPoint;
      set.curves.push_back(std::move(curve));
    }

    const std::vector<Vec3> crossings = level_set_points(pot, spin, e);
    std::vector<bool> claimed(crossings.size(), false);
    for (std::size_t ci = 0; ci < crossings.size(); ++ci) {
      if (claimed[ci]) continue;
      claimed[ci] = true;
      const Vec3 start = crossings[ci];
      bool near_fp = false;
      for (const auto& fp : fps) {
        if ((fp.xi_star - start).norm() < 1e-6) near_fp = true;
      }
      if (near_fp) continue;

      PortraitCurve curve;
      curve.energy = e;
      try {
        const ShapePoint p(spin, start);
        if (is_fixed_point_input(pot, p)) continue;
        PeriodResult pr = find_period_impl(pot, p, 1e-8, 2e4, max_rot);
        curve.samples = std::move(pr.orbit.samples);
        curve.period = pr.period;
        curve.classification = OrbitClass::Periodic;
      } catch (const Error& err) {
        if (err.code() != ErrorCode::NoReturn) throw;
        const ShapePoint p(spin, start);
        const double w0 = std::max(shape_axis(pot, p).norm(), 1e-300);
        OrbitRecord rec = integrate_shape(pot, p, 200.0 / w0, 1e-6);
        curve.samples = std::move(rec.samples);
        curve.classification = OrbitClass::SeparatrixSuspect;
      }

      // Claim the remaining seeds that lie on this traced component.
      double max_gap = 0.0;
      for (std::size_t k = 1; k < curve.samples.size(); ++k) {
        max_gap = std::max(max_gap,
                           (curve.samples[k].xi - curve.samples[k - 1].xi).norm());
      }
      const double claim = std::max(1.5 * max_gap, 1e-3);
      for (std::size_t cj = ci + 1; cj < crossings.size(); ++cj) {
        if (claimed[cj]) continue;
        for (const auto& s : curve.samples) {
          if ((s.xi - crossings[cj]).norm() < claim) {
            claimed[cj] = true;
            break;
          }
        }
      }
      set.curves.push_back(std::move(curve));
    }
  }
  return set;
}

}  // namespace gc3b
