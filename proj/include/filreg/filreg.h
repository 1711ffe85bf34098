/* Copyright 2026 The filreg Authors
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 */

/* C interface to filreg: regularized planar Filippov systems near a visible
 * tangency, their transition maps, blow-up chart constants and boundary
 * limit cycles.
 *
 * Every function returning int returns FILREG_OK or one of the error codes
 * below; the message of the last failure on the calling thread is available
 * from filreg_last_error().  Handles are opaque and owned by the caller. */

#ifndef FILREG_FILREG_H
#define FILREG_FILREG_H

#include <stddef.h>

#if defined(FILREG_BUILDING)
#define FILREG_API __attribute__((visibility("default")))
#else
#define FILREG_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

enum {
  FILREG_OK = 0,
  FILREG_E_INVALID_ARGUMENT = 1,
  FILREG_E_DOMAIN = 2,
  FILREG_E_UNRESOLVED_CONTACT = 3,
  FILREG_E_DEGENERATE_DENOMINATOR = 4,
  FILREG_E_OUT_OF_RANGE = 5,
  FILREG_E_CLASS_MISMATCH = 6,
  FILREG_E_NOT_CANONICAL = 7,
  FILREG_E_CONDITION_VIOLATED = 8,
  FILREG_E_TRANSIENT_NOT_DECAYED = 9,
  FILREG_E_NO_CROSSING = 10,
  FILREG_E_TANGENTIAL_GRAZE = 11,
  FILREG_E_STEP_UNDERFLOW = 12,
  FILREG_E_NO_EXIT = 13,
  FILREG_E_NO_ROOT = 14,
  FILREG_E_LEFT_WINDOW = 15,
  FILREG_E_SLIDING_CAPTURE = 16,
  FILREG_E_NO_RETURN = 17,
  FILREG_E_MAX_REVOLUTIONS = 18,
  FILREG_E_NO_BRACKET = 19,
  FILREG_E_NOT_CONVERGED = 20,
  FILREG_E_NON_POSITIVE = 21,
  FILREG_E_BAD_VALUATION = 22,
  FILREG_E_PARSE = 23,
  FILREG_E_IO = 24,
  FILREG_E_INTERNAL = 25
};

typedef struct filreg_system filreg_system;
typedef struct filreg_phi filreg_phi;
typedef struct filreg_trajectory filreg_trajectory;
typedef struct filreg_polyline filreg_polyline;

FILREG_API const char* filreg_version(void);
FILREG_API const char* filreg_last_error(void);
FILREG_API const char* filreg_error_name(int code);

/* ------------------------------------------------------------ transition functions */

/* phi_m, a polynomial of degree 2m+1 of class C^m on [-1, 1]. */
FILREG_API int filreg_phi_family(int m, filreg_phi** out);
FILREG_API void filreg_phi_free(filreg_phi* phi);
FILREG_API int filreg_phi_degree(const filreg_phi* phi, int* degree);
/* Exact coefficient of s^power as "num/den" (or "num"). */
FILREG_API int filreg_phi_coefficient(const filreg_phi* phi, int power, char* buf, size_t len);
/* order-th derivative of the sign-extended profile at s. */
FILREG_API int filreg_phi_eval(const filreg_phi* phi, double s, int order, double* out);
/* phi^[n] = (-1)^(n+1) phi^(n)(1) / n! */
FILREG_API int filreg_phi_bracket_constant(const filreg_phi* phi, int theorem_n, double* out);

typedef struct filreg_phi_report {
  int endpoint_values;
  int vanishing_derivatives;
  int nonvanishing_top;
  int odd;
  int monotone;
  int n_class;
} filreg_phi_report;

FILREG_API int filreg_phi_check(const filreg_phi* phi, filreg_phi_report* out);

/* ------------------------------------------------------------ systems */

/* name: canonical, boundary-cycle, boundary-cycle-reversed,
 * boundary-cycle-unstable.  alpha and vartheta apply to canonical only. */
FILREG_API int filreg_scenario(const char* name, int k, double alpha, double vartheta,
                               filreg_system** out);
/* Polynomial sections [plus.x1] [plus.x2] [minus.x1] [minus.x2] and optional [h],
 * rows "i j num den" meaning num/den x^i y^j.  h defaults to y. */
FILREG_API int filreg_system_from_text(const char* text, filreg_system** out);
FILREG_API void filreg_system_free(filreg_system* z);
FILREG_API int filreg_system_name(const filreg_system* z, char* buf, size_t len);
/* side +1 evaluates X+, -1 evaluates X-. */
FILREG_API int filreg_system_eval(const filreg_system* z, int side, double x, double y,
                                  double out[2]);

/* Multiplicity of the contact of X+ with h = 0 at (x, y); visible is 1 when
 * the contact is even and the orbit stays on the side of X+. */
FILREG_API int filreg_contact(const filreg_system* z, double x, double y, int max_order,
                              int* multiplicity, int* visible);

enum { FILREG_CROSSING = 0, FILREG_SLIDING = 1, FILREG_ESCAPING = 2, FILREG_TANGENCY = 3 };
FILREG_API int filreg_classify(const filreg_system* z, double x, double y, int* region);
FILREG_API int filreg_sliding_field(const filreg_system* z, double x, double y, double out[2]);

/* Regularized field Z_eps at (x, y). */
FILREG_API int filreg_regularized_eval(const filreg_system* z, const filreg_phi* phi,
                                       int theorem_n, double eps, double x, double y,
                                       double out[2]);

/* ------------------------------------------------------------ parameters */

typedef struct filreg_params {
  int theorem_n;
  double eps;
  double rho;
  double theta;
  double lambda; /* 0 picks lambda* / 2 */
  double yhat0;
  double L;      /* 0 picks the default window */
  double rtol;
  double atol;
  double t_max;
} filreg_params;

/* Defaults for theorem n and eps. */
FILREG_API filreg_params filreg_params_default(int theorem_n, double eps);
FILREG_API double filreg_lambda_star(int k, int theorem_n);

/* ------------------------------------------------------------ flows */

/* Flow of Z_eps from (x0, y0) for t_max, recording a sample every
 * `spacing` of arc length (0 records step ends) and every crossing of
 * y = +-eps. */
FILREG_API int filreg_simulate(const filreg_system* z, const filreg_phi* phi,
                               const filreg_params* p, double x0, double y0, double spacing,
                               filreg_trajectory** out);
FILREG_API void filreg_trajectory_free(filreg_trajectory* t);
FILREG_API size_t filreg_trajectory_size(const filreg_trajectory* t);
FILREG_API int filreg_trajectory_sample(const filreg_trajectory* t, size_t i, double out[3]);
FILREG_API size_t filreg_trajectory_event_count(const filreg_trajectory* t);

/* Event ids: -1 enters the band through y = eps, -2 leaves through y = eps,
 * -3 leaves through y = -eps, -4 enters through y = -eps. */
typedef struct filreg_event {
  double t, x, y;
  int id;
  int direction;
  int graze;
} filreg_event;

FILREG_API int filreg_trajectory_event(const filreg_trajectory* t, size_t i, filreg_event* out);
FILREG_API int filreg_trajectory_status(const filreg_trajectory* t, char* buf, size_t len);

/* ------------------------------------------------------------ transition maps */

FILREG_API int filreg_x_epsilon(const filreg_system* z, const filreg_phi* phi,
                                const filreg_params* p, double* out);
FILREG_API int filreg_psi(const filreg_system* z, const filreg_phi* phi, const filreg_params* p,
                          double* out);

/* x_eps and psi over an eps grid using `workers` threads; rows in input order. */
FILREG_API int filreg_scaling_sweep(const filreg_system* z, const filreg_phi* phi,
                                    const filreg_params* p, const double* eps, size_t count,
                                    int workers, double* x_eps, double* psi);

typedef struct filreg_map_sample {
  double input;
  double output;
  int band_crossings;
  double x_exit;
  double x_level;
  double t;
  double log_derivative; /* log |d output / d input| */
} filreg_map_sample;

FILREG_API int filreg_upper_map(const filreg_system* z, const filreg_phi* phi,
                                const filreg_params* p, double y, filreg_map_sample* out);
FILREG_API int filreg_lower_map(const filreg_system* z, const filreg_phi* phi,
                                const filreg_params* p, double x, filreg_map_sample* out);
FILREG_API int filreg_mirror_map(const filreg_system* z, const filreg_phi* phi,
                                 const filreg_params* p, double x, double* out);
/* y on x = -rho of the backward X+ orbit from (-eps^lambda, eps). */
FILREG_API int filreg_y_rho_lambda(const filreg_system* z, const filreg_phi* phi,
                                   const filreg_params* p, double* out);

typedef struct filreg_targets {
  double y_theta;
  double y_rho_lambda;
  double ybar_theta;
  double ybar_minus_rho;
  double beta_hat;
  double x_eps;
} filreg_targets;

FILREG_API int filreg_predicted_targets(const filreg_system* z, const filreg_phi* phi,
                                        const filreg_params* p, filreg_targets* out);

/* ------------------------------------------------------------ slow manifold */

/* m0, m1, trajectory proxy and the lower bound m0 - K eps / |x|^e on
 * `points` abscissae in [-L + transient, -eps^lambda].  Arrays hold
 * `points` values each; K <= 0 reports only K_min. */
FILREG_API int filreg_slow_manifold(const filreg_system* z, const filreg_phi* phi,
                                    const filreg_params* p, double K, int points, double* x,
                                    double* m0, double* m1, double* proxy, double* lower,
                                    double* K_min, int* all_hold, int* upper_all_hold);
FILREG_API int filreg_critical_manifold(const filreg_system* z, const filreg_phi* phi,
                                        const filreg_params* p, double x, double* m0,
                                        double* m1);
/* (2 alpha n! / |phi^(n)(1)|)^(1/n) */
FILREG_API int filreg_limit_coefficient(const filreg_system* z, const filreg_phi* phi,
                                        const filreg_params* p, double* out);

/* ------------------------------------------------------------ blow-up */

typedef struct filreg_chart_report {
  int k, theorem_n;
  double alpha;
  double sigma;
  double c_x, c_y;
  double u_star, u_star_check;
  double eta;
  double x1_star, lambda1;
  double residual, lambda1_numeric;
} filreg_chart_report;

/* Chart constants for X2+ = alpha x^(2k-1) + g + y vartheta read off z. */
FILREG_API int filreg_chart(const filreg_system* z, const filreg_phi* phi, int k, int theorem_n,
                            filreg_chart_report* out);

/* ------------------------------------------------------------ cycles */

FILREG_API int filreg_polyline_create(const double* x, const double* y, size_t count,
                                      filreg_polyline** out);
FILREG_API void filreg_polyline_free(filreg_polyline* p);
FILREG_API size_t filreg_polyline_size(const filreg_polyline* p);
FILREG_API int filreg_polyline_point(const filreg_polyline* p, size_t i, double out[2]);
FILREG_API int filreg_hausdorff(const filreg_polyline* a, const filreg_polyline* b, double* out);
/* H = 1 - x^(2k) - (y-1)^(2k) = 0 sampled with segments <= max_segment. */
FILREG_API int filreg_boundary_cycle_curve(int k, double max_segment, filreg_polyline** out);
FILREG_API int filreg_boundary_cycle_period(const filreg_system* z, double* out);

typedef struct filreg_cycle_result {
  double window_lo, window_hi;
  double fixed_point;
  double period;
  double multiplier;
  double log_multiplier;
  double multiplier_fd;
  double fd_resolution;
  int fd_resolved;
  int converged;
  int evaluations;
} filreg_cycle_result;

/* Section x = -rho crossed with `direction`; the search window is
 * [eps, y^eps_{rho,lambda}].  *cycle, when not NULL, receives the closing
 * orbit. */
FILREG_API int filreg_find_cycle(const filreg_system* z, const filreg_phi* phi,
                                 const filreg_params* p, int direction, filreg_cycle_result* out,
                                 filreg_polyline** cycle);
/* One revolution from (-rho, y). */
FILREG_API int filreg_return_map(const filreg_system* z, const filreg_phi* phi,
                                 const filreg_params* p, int direction, double y, double* out,
                                 double* period);

/* ------------------------------------------------------------ fits */

typedef struct filreg_fit {
  double slope, intercept, r2, predicted, rel_dev;
} filreg_fit;

/* OLS of log q on log eps; at least 6 points over 2 decades. */
FILREG_API int filreg_fit_scaling(const double* eps, const double* q, size_t count,
                                  double predicted, filreg_fit* out);
/* OLS of y on x. */
FILREG_API int filreg_linear_fit(const double* x, const double* y, size_t count, filreg_fit* out);

#ifdef __cplusplus
}
#endif

#endif /* FILREG_FILREG_H */
