/* gc3b — guiding-center three-body shape dynamics.
 *
 * C interface to the shared library: classical shape flow on the Bloch
 * sphere, rotational anholonomy, full-phase-space validation sweeps, and
 * exact diagonalization of the shape sectors.
 *
 * Conventions:
 *   - Every fallible call returns a gc3b_status; GC3B_OK is 0.
 *   - On failure, gc3b_last_error() returns a thread-local message that
 *     stays valid until the next failing call on the same thread.
 *   - Objects returned through gc3b_*_create/run calls are owned by the
 *     caller and released with the matching gc3b_*_destroy.
 *   - All arrays are caller-allocated unless documented otherwise.
 */
#ifndef GC3B_H
#define GC3B_H

#include <stddef.h>

#if defined(_WIN32)
#define GC3B_API __declspec(dllexport)
#else
#define GC3B_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gc3b_status {
  GC3B_OK = 0,
  GC3B_ERR_INVALID_ARGUMENT = 1,
  GC3B_ERR_ZERO_SIZE_SHAPE = 2,
  GC3B_ERR_SINGULAR_CONFIGURATION = 3,
  GC3B_ERR_UNSUPPORTED_FORM = 4,
  GC3B_ERR_STEP_FAILURE = 5,
  GC3B_ERR_NO_RETURN = 6,
  GC3B_ERR_FIXED_POINT_INPUT = 7,
  GC3B_ERR_NOT_CLOSED = 8,
  GC3B_ERR_EMPTY_LEVEL_SET = 9,
  GC3B_ERR_NOT_SYMMETRIC = 10,
  GC3B_ERR_SINGULAR_OPERATOR = 11,
  GC3B_ERR_INTERNAL = 99
} gc3b_status;

typedef enum gc3b_orbit_class {
  GC3B_ORBIT_PERIODIC = 0,
  GC3B_ORBIT_FIXED_POINT = 1,
  GC3B_ORBIT_SEPARATRIX_SUSPECT = 2,
  GC3B_ORBIT_TRUNCATED = 3
} gc3b_orbit_class;

typedef enum gc3b_stability {
  GC3B_STAB_ELLIPTIC = 0,
  GC3B_STAB_HYPERBOLIC = 1,
  GC3B_STAB_DEGENERATE = 2,
  GC3B_STAB_SINGULAR = 3
} gc3b_stability;

typedef struct gc3b_potential gc3b_potential;
typedef struct gc3b_orbit gc3b_orbit;
typedef struct gc3b_fixed_point_list gc3b_fixed_point_list;
typedef struct gc3b_portrait gc3b_portrait;
typedef struct gc3b_spectrum_table gc3b_spectrum_table;

/* Library version string, e.g. "0.1.0". */
GC3B_API const char* gc3b_version(void);

/* Thread-local message describing the most recent failure on this thread. */
GC3B_API const char* gc3b_last_error(void);

/* ----- potentials ----- */

/* Single pairwise power-law interaction u(rho) = g * rho^lambda. */
GC3B_API gc3b_status gc3b_potential_power(double g, double lambda,
                                          gc3b_potential** out);

/* Sum of n pairwise power-law terms. */
GC3B_API gc3b_status gc3b_potential_sum(const double* g, const double* lambda,
                                        int n, gc3b_potential** out);

/* Declared symmetrized polynomial in the size S and the shape-vector
 * components: sum_i coeff[i] * S^{s_power[i]} * prod_a f_a^{f_exp[3i+a]},
 * where f_a = S xi_a / 2 classically. */
GC3B_API gc3b_status gc3b_potential_polynomial(const double* coeff,
                                               const int* s_power,
                                               const int* f_exp, int n,
                                               gc3b_potential** out);

GC3B_API void gc3b_potential_destroy(gc3b_potential* pot);

/* V(S, xi). */
GC3B_API gc3b_status gc3b_potential_eval(const gc3b_potential* pot,
                                         double spin, const double xi[3],
                                         double* value);

/* dV/dS and the shape gradient at fixed S. */
GC3B_API gc3b_status gc3b_potential_grad(const gc3b_potential* pot,
                                         double spin, const double xi[3],
                                         double* dV_dS, double grad_xi[3]);

/* ----- geometry ----- */

/* Squared side lengths and signed area of the triangle encoded by a shape
 * point. */
GC3B_API gc3b_status gc3b_triangle(double spin, const double xi[3],
                                   double rho[3], double* area);

/* Shape decomposition of guiding-center coordinates: size, unit shape
 * vector, and the orientation phase of the first spinor component. */
GC3B_API gc3b_status gc3b_shape_from_coordinates(const double x[3],
                                                 const double y[3],
                                                 double* spin, double xi[3],
                                                 double* gamma);

/* Conserved quantities of guiding-center coordinates, in the order
 * energy, L, S, J, Tx, Ty. `pot` may be NULL (energy then omits V). */
GC3B_API gc3b_status gc3b_invariants(const double x[3], const double y[3],
                                     const gc3b_potential* pot,
                                     double omega_c, double out[6]);

/* ----- shape flow ----- */

/* Integrate the shape flow for a fixed duration. */
GC3B_API gc3b_status gc3b_orbit_run(const gc3b_potential* pot, double spin,
                                    const double xi0[3], double t_end,
                                    double tol, gc3b_orbit** out);

/* Detect the first return to the start; the recorded orbit spans exactly
 * one period. `out` may be NULL when only the period is wanted. */
GC3B_API gc3b_status gc3b_orbit_find_period(const gc3b_potential* pot,
                                            double spin, const double xi0[3],
                                            double tol, double* period,
                                            gc3b_orbit** out);

GC3B_API void gc3b_orbit_destroy(gc3b_orbit* orbit);
GC3B_API long gc3b_orbit_sample_count(const gc3b_orbit* orbit);
GC3B_API gc3b_status gc3b_orbit_sample(const gc3b_orbit* orbit, long i,
                                       double* t, double xi[3]);
GC3B_API int gc3b_orbit_classification(const gc3b_orbit* orbit);
/* NaN when no period was detected. */
GC3B_API double gc3b_orbit_period(const gc3b_orbit* orbit);
/* Conserved shape energy V(S, xi(0)). */
GC3B_API double gc3b_orbit_energy(const gc3b_orbit* orbit);

/* ----- critical points and portraits ----- */

GC3B_API gc3b_status gc3b_fixed_points(const gc3b_potential* pot, double spin,
                                       gc3b_fixed_point_list** out);
GC3B_API void gc3b_fixed_point_list_destroy(gc3b_fixed_point_list* list);
GC3B_API int gc3b_fixed_point_count(const gc3b_fixed_point_list* list);
GC3B_API gc3b_status gc3b_fixed_point_get(const gc3b_fixed_point_list* list,
                                          int i, double xi[3], int* stability,
                                          double* rate, double* value,
                                          double* residual);

GC3B_API gc3b_status gc3b_portrait_run(const gc3b_potential* pot, double spin,
                                       const double* energies, int n_energies,
                                       int resolution, gc3b_portrait** out);
GC3B_API void gc3b_portrait_destroy(gc3b_portrait* portrait);
GC3B_API int gc3b_portrait_curve_count(const gc3b_portrait* portrait);
GC3B_API gc3b_status gc3b_portrait_curve_info(const gc3b_portrait* portrait,
                                              int i, double* energy,
                                              int* classification,
                                              long* n_points);
GC3B_API gc3b_status gc3b_portrait_curve_point(const gc3b_portrait* portrait,
                                               int curve, long point,
                                               double* t, double xi[3]);

/* ----- rotational anholonomy ----- */

typedef struct gc3b_anholonomy_report {
  double T_s;                 /* shape period */
  double omega_dyn_avg;       /* period average of omega_c + dV/dS */
  double Omega;               /* enclosed solid angle, reduced branch */
  double omega_geo;           /* -Omega / (2 T_s) */
  double omega_r;             /* omega_dyn_avg + omega_geo */
  double I_s;                 /* shape action, S Omega / (4 pi) */
  double delta_gamma_direct;  /* orientation advance from direct spinor
                                 integration over one period */
  double spin;
  double energy;
  int fixed_point;            /* 1: equilibrium input; period fields NaN */
  int gauge_singularity;      /* 1: orientation chart degenerated en route */
} gc3b_anholonomy_report;

GC3B_API gc3b_status gc3b_anholonomy(const gc3b_potential* pot, double spin,
                                     const double xi0[3], double omega_c,
                                     double tol,
                                     gc3b_anholonomy_report* out);

/* Shape action I_s(E) on the energy level containing the point nearest to
 * `hint` (NULL selects a default). */
GC3B_API gc3b_status gc3b_shape_action(const gc3b_potential* pot, double spin,
                                       double energy, const double* hint,
                                       double* action);

/* ----- full-phase-space validation ----- */

/* Shape-tracking error of the reduced model against the exact flow for each
 * field strength, plus the fitted log-log slope. `pot` is the physical
 * interaction; `errors` has n entries. */
GC3B_API gc3b_status gc3b_b_sweep(const gc3b_potential* pot, double spin,
                                  const double xi0[3], const double* b_values,
                                  int n, double t_obs, double* errors,
                                  double* slope);

/* ----- quantum sectors ----- */

GC3B_API gc3b_status gc3b_spectrum_run(const gc3b_potential* pot, int s_max,
                                       double omega_c, int l_max,
                                       gc3b_spectrum_table** out);
GC3B_API void gc3b_spectrum_destroy(gc3b_spectrum_table* table);
GC3B_API long gc3b_spectrum_row_count(const gc3b_spectrum_table* table);
/* `irrep` receives a pointer into the table ("A1", "A2", "E", or "-");
 * `L_eigenvalue` is the raw operator eigenvalue l + 1/2. Any output pointer
 * may be NULL. */
GC3B_API gc3b_status gc3b_spectrum_row(const gc3b_spectrum_table* table,
                                       long i, int* l, int* s, int* n,
                                       const char** irrep, double* E_tilde,
                                       double* E, double* L_eigenvalue);

#ifdef __cplusplus
}
#endif

#endif /* GC3B_H */
