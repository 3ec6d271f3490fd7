#include "gc3b/gc3b.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <string>
#include <vector>

#include "core/anholonomy.hpp"
#include "core/errors.hpp"
#include "core/geometry.hpp"
#include "core/potential.hpp"
#include "core/quantum.hpp"
#include "core/reference.hpp"
#include "core/shape_dynamics.hpp"
#include "core/types.hpp"

struct gc3b_potential {
  gc3b::Potential impl;
};
struct gc3b_orbit {
  gc3b::OrbitRecord impl;
};
struct gc3b_fixed_point_list {
  std::vector<gc3b::FixedPointReport> impl;
};
struct gc3b_portrait {
  gc3b::PortraitSet impl;
};
struct gc3b_spectrum_table {
  std::vector<gc3b::SpectrumLine> impl;
};

namespace {

thread_local std::string t_last_error;

gc3b_status status_of(gc3b::ErrorCode code) {
  using EC = gc3b::ErrorCode;
  switch (code) {
    case EC::InvalidArgument: return GC3B_ERR_INVALID_ARGUMENT;
    case EC::ZeroSizeShape: return GC3B_ERR_ZERO_SIZE_SHAPE;
    case EC::SingularConfiguration: return GC3B_ERR_SINGULAR_CONFIGURATION;
    case EC::UnsupportedForm: return GC3B_ERR_UNSUPPORTED_FORM;
    case EC::StepFailure: return GC3B_ERR_STEP_FAILURE;
    case EC::NoReturn: return GC3B_ERR_NO_RETURN;
    case EC::FixedPointInput: return GC3B_ERR_FIXED_POINT_INPUT;
    case EC::NotClosed: return GC3B_ERR_NOT_CLOSED;
    case EC::EmptyLevelSet: return GC3B_ERR_EMPTY_LEVEL_SET;
    case EC::NotSymmetric: return GC3B_ERR_NOT_SYMMETRIC;
    case EC::SingularOperator: return GC3B_ERR_SINGULAR_OPERATOR;
  }
  return GC3B_ERR_INTERNAL;
}

template <typename Fn>
gc3b_status guarded(Fn&& fn) {
  try {
    fn();
    return GC3B_OK;
  } catch (const gc3b::Error& e) {
    t_last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return GC3B_ERR_INTERNAL;
  } catch (...) {
    t_last_error = "unknown error";
    return GC3B_ERR_INTERNAL;
  }
}

gc3b_status invalid(const char* msg) {
  t_last_error = msg;
  return GC3B_ERR_INVALID_ARGUMENT;
}

gc3b::Vec3 vec3_of(const double v[3]) { return gc3b::Vec3(v[0], v[1], v[2]); }

void store(const gc3b::Vec3& v, double out[3]) {
  out[0] = v[0];
  out[1] = v[1];
  out[2] = v[2];
}

constexpr int kStabilityCodes[] = {GC3B_STAB_ELLIPTIC, GC3B_STAB_HYPERBOLIC,
                                   GC3B_STAB_DEGENERATE, GC3B_STAB_SINGULAR};
constexpr int kOrbitCodes[] = {GC3B_ORBIT_PERIODIC, GC3B_ORBIT_FIXED_POINT,
                               GC3B_ORBIT_SEPARATRIX_SUSPECT,
                               GC3B_ORBIT_TRUNCATED};

}  // namespace

extern "C" {

const char* gc3b_version(void) { return "0.1.0"; }

const char* gc3b_last_error(void) { return t_last_error.c_str(); }

gc3b_status gc3b_potential_power(double g, double lambda,
                                 gc3b_potential** out) {
  if (!out) return invalid("null output pointer");
  return guarded([&] {
    *out = new gc3b_potential{gc3b::Potential::power(g, lambda)};
  });
}

gc3b_status gc3b_potential_sum(const double* g, const double* lambda, int n,
                               gc3b_potential** out) {
  if (!out || !g || !lambda || n < 1) return invalid("bad term list");
  return guarded([&] {
    std::vector<gc3b::PowerTerm> terms(n);
    for (int i = 0; i < n; ++i) terms[i] = {g[i], lambda[i]};
    *out = new gc3b_potential{gc3b::Potential::sum(std::move(terms))};
  });
}

gc3b_status gc3b_potential_polynomial(const double* coeff, const int* s_power,
                                      const int* f_exp, int n,
                                      gc3b_potential** out) {
  if (!out || !coeff || !s_power || !f_exp || n < 1) {
    return invalid("bad polynomial term list");
  }
  return guarded([&] {
    std::vector<gc3b::PolyTerm> terms(n);
    for (int i = 0; i < n; ++i) {
      terms[i] = {coeff[i],
                  s_power[i],
                  {f_exp[3 * i], f_exp[3 * i + 1], f_exp[3 * i + 2]}};
    }
    *out = new gc3b_potential{gc3b::Potential::polynomial(std::move(terms))};
  });
}

void gc3b_potential_destroy(gc3b_potential* pot) { delete pot; }

gc3b_status gc3b_potential_eval(const gc3b_potential* pot, double spin,
                                const double xi[3], double* value) {
  if (!pot || !xi || !value) return invalid("null argument");
  return guarded([&] {
    *value = pot->impl.eval_shape(gc3b::ShapePoint(spin, vec3_of(xi)));
  });
}

gc3b_status gc3b_potential_grad(const gc3b_potential* pot, double spin,
                                const double xi[3], double* dV_dS,
                                double grad_xi[3]) {
  if (!pot || !xi) return invalid("null argument");
  return guarded([&] {
    const auto g = pot->impl.grad_shape(gc3b::ShapePoint(spin, vec3_of(xi)));
    if (dV_dS) *dV_dS = g.dV_dS;
    if (grad_xi) store(g.grad_xi, grad_xi);
  });
}

gc3b_status gc3b_triangle(double spin, const double xi[3], double rho[3],
                          double* area) {
  if (!xi) return invalid("null argument");
  return guarded([&] {
    const auto tri =
        gc3b::triangle_from_shape(gc3b::ShapePoint(spin, vec3_of(xi)));
    if (rho) {
      rho[0] = tri.rho[0];
      rho[1] = tri.rho[1];
      rho[2] = tri.rho[2];
    }
    if (area) *area = tri.area;
  });
}

gc3b_status gc3b_shape_from_coordinates(const double x[3], const double y[3],
                                        double* spin, double xi[3],
                                        double* gamma) {
  if (!x || !y) return invalid("null argument");
  return guarded([&] {
    gc3b::GuidingCenterState state{vec3_of(x), vec3_of(y)};
    const auto modes = gc3b::decompose(state);
    const auto shape = gc3b::bloch_from_spinor(modes.psi);
    if (spin) *spin = shape.spin();
    if (xi) store(shape.xi(), xi);
    if (gamma) *gamma = gc3b::spinor_angles(modes.psi).gamma;
  });
}

gc3b_status gc3b_invariants(const double x[3], const double y[3],
                            const gc3b_potential* pot, double omega_c,
                            double out[6]) {
  if (!x || !y || !out) return invalid("null argument");
  return guarded([&] {
    gc3b::GuidingCenterState state{vec3_of(x), vec3_of(y)};
    const auto inv =
        gc3b::invariants(state, pot ? &pot->impl : nullptr, omega_c);
    out[0] = inv.energy;
    out[1] = inv.L;
    out[2] = inv.S;
    out[3] = inv.J;
    out[4] = inv.Tx;
    out[5] = inv.Ty;
  });
}

gc3b_status gc3b_orbit_run(const gc3b_potential* pot, double spin,
                           const double xi0[3], double t_end, double tol,
                           gc3b_orbit** out) {
  if (!pot || !xi0 || !out) return invalid("null argument");
  return guarded([&] {
    *out = new gc3b_orbit{gc3b::integrate_shape(
        pot->impl, gc3b::ShapePoint(spin, vec3_of(xi0)), t_end, tol)};
  });
}

gc3b_status gc3b_orbit_find_period(const gc3b_potential* pot, double spin,
                                   const double xi0[3], double tol,
                                   double* period, gc3b_orbit** out) {
  if (!pot || !xi0) return invalid("null argument");
  return guarded([&] {
    auto res = gc3b::find_period(pot->impl,
                                 gc3b::ShapePoint(spin, vec3_of(xi0)), tol);
    if (period) *period = res.period;
    if (out) *out = new gc3b_orbit{std::move(res.orbit)};
  });
}

void gc3b_orbit_destroy(gc3b_orbit* orbit) { delete orbit; }

long gc3b_orbit_sample_count(const gc3b_orbit* orbit) {
  return orbit ? static_cast<long>(orbit->impl.samples.size()) : 0;
}

gc3b_status gc3b_orbit_sample(const gc3b_orbit* orbit, long i, double* t,
                              double xi[3]) {
  if (!orbit || i < 0 ||
      i >= static_cast<long>(orbit->impl.samples.size())) {
    return invalid("sample index out of range");
  }
  const auto& s = orbit->impl.samples[static_cast<size_t>(i)];
  if (t) *t = s.t;
  if (xi) store(s.xi, xi);
  return GC3B_OK;
}

int gc3b_orbit_classification(const gc3b_orbit* orbit) {
  if (!orbit) return GC3B_ORBIT_TRUNCATED;
  return kOrbitCodes[static_cast<int>(orbit->impl.classification)];
}

double gc3b_orbit_period(const gc3b_orbit* orbit) {
  if (orbit && orbit->impl.period) return *orbit->impl.period;
  return std::numeric_limits<double>::quiet_NaN();
}

double gc3b_orbit_energy(const gc3b_orbit* orbit) {
  return orbit ? orbit->impl.energy
               : std::numeric_limits<double>::quiet_NaN();
}

gc3b_status gc3b_fixed_points(const gc3b_potential* pot, double spin,
                              gc3b_fixed_point_list** out) {
  if (!pot || !out) return invalid("null argument");
  return guarded([&] {
    *out = new gc3b_fixed_point_list{gc3b::fixed_points(pot->impl, spin)};
  });
}

void gc3b_fixed_point_list_destroy(gc3b_fixed_point_list* list) {
  delete list;
}

int gc3b_fixed_point_count(const gc3b_fixed_point_list* list) {
  return list ? static_cast<int>(list->impl.size()) : 0;
}

gc3b_status gc3b_fixed_point_get(const gc3b_fixed_point_list* list, int i,
                                 double xi[3], int* stability, double* rate,
                                 double* value, double* residual) {
  if (!list || i < 0 || i >= static_cast<int>(list->impl.size())) {
    return invalid("fixed-point index out of range");
  }
  const auto& fp = list->impl[static_cast<size_t>(i)];
  if (xi) store(fp.xi_star, xi);
  if (stability) *stability = kStabilityCodes[static_cast<int>(fp.stability)];
  if (rate) *rate = fp.rate;
  if (value) *value = fp.value;
  if (residual) *residual = fp.residual;
  return GC3B_OK;
}

gc3b_status gc3b_portrait_run(const gc3b_potential* pot, double spin,
                              const double* energies, int n_energies,
                              int resolution, gc3b_portrait** out) {
  if (!pot || !energies || n_energies < 1 || !out) {
    return invalid("bad portrait request");
  }
  return guarded([&] {
    std::vector<double> e(energies, energies + n_energies);
    *out = new gc3b_portrait{gc3b::portrait(pot->impl, spin, e, resolution)};
  });
}

void gc3b_portrait_destroy(gc3b_portrait* portrait) { delete portrait; }

int gc3b_portrait_curve_count(const gc3b_portrait* portrait) {
  return portrait ? static_cast<int>(portrait->impl.curves.size()) : 0;
}

gc3b_status gc3b_portrait_curve_info(const gc3b_portrait* portrait, int i,
                                     double* energy, int* classification,
                                     long* n_points) {
  if (!portrait || i < 0 ||
      i >= static_cast<int>(portrait->impl.curves.size())) {
    return invalid("curve index out of range");
  }
  const auto& c = portrait->impl.curves[static_cast<size_t>(i)];
  if (energy) *energy = c.energy;
  if (classification) {
    *classification = kOrbitCodes[static_cast<int>(c.classification)];
  }
  if (n_points) *n_points = static_cast<long>(c.samples.size());
  return GC3B_OK;
}

gc3b_status gc3b_portrait_curve_point(const gc3b_portrait* portrait,
                                      int curve, long point, double* t,
                                      double xi[3]) {
  if (!portrait || curve < 0 ||
      curve >= static_cast<int>(portrait->impl.curves.size())) {
    return invalid("curve index out of range");
  }
  const auto& c = portrait->impl.curves[static_cast<size_t>(curve)];
  if (point < 0 || point >= static_cast<long>(c.samples.size())) {
    return invalid("point index out of range");
  }
  const auto& s = c.samples[static_cast<size_t>(point)];
  if (t) *t = s.t;
  if (xi) store(s.xi, xi);
  return GC3B_OK;
}

gc3b_status gc3b_anholonomy(const gc3b_potential* pot, double spin,
                            const double xi0[3], double omega_c, double tol,
                            gc3b_anholonomy_report* out) {
  if (!pot || !xi0 || !out) return invalid("null argument");
  return guarded([&] {
    const auto r = gc3b::report(pot->impl,
                                gc3b::ShapePoint(spin, vec3_of(xi0)),
                                omega_c, tol);
    out->T_s = r.T_s;
    out->omega_dyn_avg = r.omega_dyn_avg;
    out->Omega = r.Omega;
    out->omega_geo = r.omega_geo;
    out->omega_r = r.omega_r;
    out->I_s = r.I_s;
    out->delta_gamma_direct = r.delta_gamma_direct;
    out->spin = r.spin;
    out->energy = r.energy;
    out->fixed_point = r.fixed_point ? 1 : 0;
    out->gauge_singularity = r.gauge_singularity ? 1 : 0;
  });
}

gc3b_status gc3b_shape_action(const gc3b_potential* pot, double spin,
                              double energy, const double* hint,
                              double* action) {
  if (!pot || !action) return invalid("null argument");
  return guarded([&] {
    std::optional<gc3b::Vec3> h;
    if (hint) h = vec3_of(hint);
    *action = gc3b::shape_action(pot->impl, spin, energy, h);
  });
}

gc3b_status gc3b_b_sweep(const gc3b_potential* pot, double spin,
                         const double xi0[3], const double* b_values, int n,
                         double t_obs, double* errors, double* slope) {
  if (!pot || !xi0 || !b_values || n < 1 || !errors) {
    return invalid("bad sweep request");
  }
  return guarded([&] {
    std::vector<double> bl(b_values, b_values + n);
    const auto res = gc3b::b_sweep(
        pot->impl, gc3b::ShapePoint(spin, vec3_of(xi0)), bl, t_obs);
    for (int i = 0; i < n; ++i) errors[i] = res.points[i].max_angle_error;
    if (slope) *slope = res.slope;
  });
}

gc3b_status gc3b_spectrum_run(const gc3b_potential* pot, int s_max,
                              double omega_c, int l_max,
                              gc3b_spectrum_table** out) {
  if (!pot || !out) return invalid("null argument");
  return guarded([&] {
    *out = new gc3b_spectrum_table{
        gc3b::spectrum(pot->impl, s_max, omega_c, l_max)};
  });
}

void gc3b_spectrum_destroy(gc3b_spectrum_table* table) { delete table; }

long gc3b_spectrum_row_count(const gc3b_spectrum_table* table) {
  return table ? static_cast<long>(table->impl.size()) : 0;
}

gc3b_status gc3b_spectrum_row(const gc3b_spectrum_table* table, long i,
                              int* l, int* s, int* n, const char** irrep,
                              double* E_tilde, double* E,
                              double* L_eigenvalue) {
  if (!table || i < 0 || i >= static_cast<long>(table->impl.size())) {
    return invalid("row index out of range");
  }
  const auto& row = table->impl[static_cast<size_t>(i)];
  if (l) *l = row.l;
  if (s) *s = row.s;
  if (n) *n = row.n;
  if (irrep) *irrep = row.irrep.c_str();
  if (E_tilde) *E_tilde = row.E_tilde;
  if (E) *E = row.E;
  if (L_eigenvalue) *L_eigenvalue = row.L_eigenvalue;
  return GC3B_OK;
}

}  // extern "C"
