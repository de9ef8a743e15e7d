/*
 * assignflow — contextual data labeling on graphs by geometric integration
 * of the assignment-flow ODE, with closed-form stability certificates.
 *
 * C interface of the shared library. All functions return AF_OK or an error
 * code; af_last_error() describes the most recent failure on the calling
 * thread. States and distance matrices are dense row-major buffers of
 * doubles (m vertices by n labels). Opaque handles must be released with
 * their matching *_free function.
 */

#ifndef ASSIGNFLOW_H
#define ASSIGNFLOW_H

#include <stddef.h>

#if defined(_WIN32)
#define AF_API __declspec(dllexport)
#else
#define AF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum af_status {
  AF_OK = 0,
  AF_ERROR_INVALID_ARGUMENT = 1,
  AF_ERROR_DOMAIN = 2,
  AF_ERROR_RANGE = 3,
  AF_ERROR_RESOURCE_LIMIT = 4,
  AF_ERROR_PRECONDITION = 5,
  AF_ERROR_DATA = 6,
  AF_ERROR_UNSUPPORTED = 7,
  AF_ERROR_IO = 8,
  AF_ERROR_INTERNAL = 9
} af_status;

AF_API const char *af_version(void);
/* Message of the last failure on this thread; empty string if none. */
AF_API const char *af_last_error(void);

/* Releases buffers returned through double** out-parameters. */
AF_API void af_buffer_free(double *buffer);

/* ---------------------------------------------------------------- weights */

typedef struct af_weights af_weights;

/* Uniform 1/|N_i| weights over a height x width grid with Chebyshev
 * neighborhoods of the given radius, shrunk at the boundary. */
AF_API af_status af_weights_grid_uniform(int height, int width, int radius,
                                         af_weights **out);
AF_API af_status af_weights_from_entries(int m, size_t count, const int *rows,
                                         const int *cols, const double *values,
                                         af_weights **out);
AF_API af_status af_weights_from_dense(int m, const double *values,
                                       af_weights **out);
/* Doubly stochastic circulant from (alpha, beta, gamma_1..gamma_c). */
AF_API af_status af_weights_circulant(int n, double alpha, double beta,
                                      const double *gamma, int gamma_count,
                                      af_weights **out);
/* The fixed 3-vertex, 2-label example whose equilibria form a line. */
AF_API af_status af_weights_nonpos_diag(af_weights **out);
/* Edge-list CSV `i,k,omega`. */
AF_API af_status af_weights_read_csv(const char *path, af_weights **out);
AF_API int af_weights_size(const af_weights *w);
AF_API af_status af_weights_dense(const af_weights *w, double *out);
AF_API af_status af_weights_neighborhood_sizes(const af_weights *w, int *sizes);
AF_API void af_weights_free(af_weights *w);

/* ---------------------------------------------------------------- core ops */

AF_API af_status af_sflow_init(const af_weights *w, const double *distances,
                               int m, int n, double *state_out);
AF_API af_status af_sflow_rhs(const af_weights *w, const double *state, int m,
                              int n, double *rhs_out);
AF_API af_status af_representative_rhs(const af_weights *w, const double *p,
                                       int n, double *rhs_out);
AF_API af_status af_euler_step(const af_weights *w, const double *state, int m,
                               int n, double h, double *state_out);
AF_API af_status af_avg_entropy(const double *state, int m, int n, double *out);

/* -------------------------------------------------------------- integration */

typedef enum af_termination_mode {
  AF_TERMINATE_ENTROPY = 0,
  AF_TERMINATE_ATTRACTION_CERTIFIED = 1,
  AF_TERMINATE_FIXED_STEPS = 2
} af_termination_mode;

typedef struct af_integrator_config {
  double h;                 /* step size, > 0 */
  long max_steps;           /* >= 1 */
  double entropy_threshold; /* in (0,1) */
  int record_every;         /* sampling (and certificate check) stride */
  int mode;                 /* af_termination_mode */
} af_integrator_config;

/* Fills the defaults: h=0.1, max_steps=100000, threshold=1e-3,
 * record_every=10, entropy mode. */
AF_API void af_integrator_config_init(af_integrator_config *cfg);

typedef enum af_termination_reason {
  AF_REASON_ENTROPY = 0,
  AF_REASON_ATTRACTION = 1,
  AF_REASON_FIXED = 2,
  AF_REASON_BUDGET = 3
} af_termination_reason;

typedef struct af_termination {
  int reason;           /* af_termination_reason */
  long steps;
  double time;
  double final_entropy;
  int certified;        /* certificate of the final state */
  int argmax_tie;
  double epsilon;
  double margin;
  double max_l1;
} af_termination;

typedef struct af_trajectory af_trajectory;

AF_API af_status af_integrate(const af_weights *w, const double *state0, int m,
                              int n, const af_integrator_config *cfg,
                              af_trajectory **trajectory_out,
                              af_termination *termination_out);
AF_API long af_trajectory_count(const af_trajectory *t);
AF_API af_status af_trajectory_sample(const af_trajectory *t, long index,
                                      double *time_out, double *state_out);
AF_API af_status af_trajectory_final(const af_trajectory *t, double *state_out);
/* Assignment state recovered from the S-trajectory by lifted quadrature. */
AF_API af_status af_trajectory_w_state(const af_trajectory *t, double *w_out);
/* Long-format states CSV `t,i,j,value` and per-sample diagnostics CSV
 * `t,avg_entropy,lyapunov,min_rowmax`; either path may be NULL. */
AF_API af_status af_trajectory_write_csv(const af_trajectory *t,
                                         const char *states_path,
                                         const char *diagnostics_path);
AF_API void af_trajectory_free(af_trajectory *t);

AF_API af_status af_certified_round(const af_weights *w, const double *state,
                                    int m, int n, double *rounded_out,
                                    int *certified, double *epsilon,
                                    double *margin, int *argmax_tie);

/* --------------------------------------------------------------- stability */

typedef struct af_report af_report;

AF_API af_status af_is_equilibrium(const af_weights *w, const double *state,
                                   int m, int n, double tol, int *is_equilibrium,
                                   double *residual);
AF_API af_status af_classify(const af_weights *w, const double *state, int m,
                             int n, af_report **out);
AF_API af_status af_report_classification(const af_report *r, const char **name);
/* eps_est / eps_unif are NaN when not applicable. */
AF_API af_status af_report_values(const af_report *r, double *residual,
                                  double *eps_est, double *eps_unif);
AF_API long af_report_spectrum_count(const af_report *r);
AF_API af_status af_report_spectrum(const af_report *r, double *re, double *im);
AF_API af_status af_report_rates(const af_report *r, double *rates);
/* Flat key=value report and `re,im` spectrum CSV; either path may be NULL. */
AF_API af_status af_report_write(const af_report *r, const char *keyvalue_path,
                                 const char *spectrum_csv_path);
AF_API void af_report_free(af_report *r);

AF_API af_status af_jacobian(const af_weights *w, const double *state, int m,
                             int n, double *jacobian_out);
AF_API af_status af_eps_est(const af_weights *w, const double *integral_state,
                            int m, int n, double *out);
AF_API af_status af_eps_unif(const int *neighborhood_sizes, int m, double *out);
AF_API af_status af_in_attraction_polytope(const af_weights *w,
                                           const double *state,
                                           const double *integral_state, int m,
                                           int n, int *inside);

/* ------------------------------------------------------ linear assignment flow */

typedef struct af_linear_system af_linear_system;

/* A = R_{s_hat}(Omega kron I_n). b may be NULL (homogeneous); w0 may be NULL
 * (defaults to s_hat). */
AF_API af_status af_linsys_create(const af_weights *w, const double *s_hat,
                                  const double *b, const double *w0, int m,
                                  int n, af_linear_system **out);
AF_API af_status af_linsys_apply(const af_linear_system *sys, const double *v,
                                 double *out);
/* Pseudoinverse shift of the inhomogeneity; fails when b is outside the
 * range of A. Outputs may be NULL. */
AF_API af_status af_linsys_homogenize(const af_linear_system *sys,
                                      const double *v0, double *shifted_v0,
                                      double *shift);
/* Propagates the homogeneous part from v0 to time t. */
AF_API af_status af_linsys_propagate(const af_linear_system *sys,
                                     const double *v0, double t, double *v_out);
AF_API af_status af_linsys_spectrum(const af_linear_system *sys, double *re,
                                    double *im, int *rank, int *nullspace_dim,
                                    int *all_real);
/* Predicted labels of the lifted limit (1-based; 0 marks a tie row).
 * v0 NULL means the homogenized initial value of the flow started at 0. */
AF_API af_status af_linsys_predict_labels(const af_linear_system *sys,
                                          const double *v0, int *labels_out,
                                          int *determinate);
AF_API void af_linsys_free(af_linear_system *sys);

/* Limit of t -> exp_{base}(t direction), row-wise. */
AF_API af_status af_lift_limit(const double *direction, const double *base,
                               int m, int n, double *state_out, int *tie_count);

/* --------------------------------------------------------- counterexample lab */

AF_API af_status af_representative_of(const double *state, int n, double tol,
                                      double *p_out);
AF_API af_status af_product_diagnostic(const double *p, int n, double alpha,
                                       double beta, const double *gamma,
                                       int gamma_count, double *pi,
                                       double *dpi_dt, int *predicted_sign);
AF_API af_status af_regime_classify(int n, double alpha, double beta,
                                    const double *gamma, int gamma_count,
                                    const char **regime);
/* Geometric Euler run of the representative flow; any output may be NULL.
 * stop_min_entry > 0 stops once min_j p_j drops below it. */
AF_API af_status af_run_representative(const af_weights *circulant,
                                       const double *p0, int n, double h,
                                       long max_steps, double stop_min_entry,
                                       double *p_final, double *winding,
                                       double *pi_final, double *min_entry,
                                       long *steps_run);

/* ---------------------------------------------------------------- pipeline */

AF_API af_status af_compute_distances(const double *features, int m, int dim,
                                      const double *prototypes, int n,
                                      double scale, double *distances_out);

/* Full certified labeling loop on a grid: distances, sflow_init, integrate,
 * certified rounding, classification of the rounded state. labels_out gets
 * 1-based ids. report_out may be NULL; when supplied, *report_out is NULL
 * if rounding hit an argmax tie. Uncertified completion still returns
 * AF_OK with certified = 0 in the termination record. */
AF_API af_status af_label_grid(const double *features, int height, int width,
                               int dim, const double *prototypes, int n,
                               double scale, int radius,
                               const af_integrator_config *cfg, int *labels_out,
                               af_termination *termination_out,
                               af_report **report_out);

/* Feature rows from a PGM/PPM image (maxval 255) or a CSV of feature rows.
 * *height/*width are 0 for CSV input. Free *features with af_buffer_free. */
AF_API af_status af_read_features(const char *path, int *height, int *width,
                                  int *dim, double **features);
AF_API af_status af_read_matrix_csv(const char *path, int *rows, int *cols,
                                    double **values);
AF_API af_status af_write_ppm(const char *path, const double *rgb, int height,
                              int width);
AF_API af_status af_write_labeling_csv(const char *path, const int *labels,
                                       int count, int row_width);
AF_API af_status af_write_certificate(const char *path,
                                      const af_termination *termination,
                                      const af_report *report);

/* Bundled 12x12 tri-color instance (144 x 3 feature rows). */
AF_API af_status af_demo_tricolor(double *features, int *height, int *width);

#ifdef __cplusplus
}
#endif

#endif /* ASSIGNFLOW_H */
