// Copyright 2026 The filreg Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.

#include "filreg/filreg.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <new>
#include <numeric>
#include <string>

#include "blowup.hpp"
#include "cycles.hpp"
#include "error.hpp"
#include "fit.hpp"
#include "scenarios.hpp"
#include "transition_maps.hpp"

struct filreg_system {
  filreg::FilippovSystem z;
};
struct filreg_phi {
  filreg::TransitionFunction phi;
};
struct filreg_trajectory {
  filreg::HybridResult r;
};
struct filreg_polyline {
  filreg::Polyline p;
};

namespace {

using namespace filreg;

thread_local std::string g_last_error;

template <class F>
int guarded(F&& f) {
  try {
    f();
    g_last_error.clear();
    return FILREG_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return static_cast<int>(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return FILREG_E_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return FILREG_E_INTERNAL;
  }
}

template <class... P>
void need(P... ptrs) {
  if (((ptrs == nullptr) || ...)) fail(Errc::InvalidArgument, "null argument");
}

void copy_string(const std::string& s, char* buf, size_t len) {
  need(buf);
  if (len == 0 || s.size() + 1 > len) fail(Errc::OutOfRange, "buffer too small");
  std::memcpy(buf, s.c_str(), s.size() + 1);
}

IntegratorConfig ode_of(const filreg_params& p) {
  IntegratorConfig c;
  if (p.rtol > 0) c.rtol = p.rtol;
  if (p.atol > 0) c.atol = p.atol;
  return c;
}

TransitionConfig transition_of(const filreg_system* z, const filreg_phi* phi, const filreg_params* p) {
  need(z, phi, p);
  TransitionConfig c(z->z, phi->phi, p->theorem_n, p->eps);
  c.rho = p->rho;
  c.theta = p->theta;
  c.lambda = p->lambda;
  c.yhat0 = p->yhat0;
  c.L = p->L;
  c.ode = ode_of(*p);
  c.t_max = p->t_max;
  return c;
}

CycleConfig cycle_of(const filreg_system* z, const filreg_phi* phi, const filreg_params* p,
                     int direction) {
  need(z, phi, p);
  CycleConfig c(z->z, phi->phi, p->theorem_n, p->eps);
  c.rho = p->rho;
  c.theta = p->theta;
  c.lambda = p->lambda;
  c.direction = direction;
  c.ode = ode_of(*p);
  c.t_max = p->t_max;
  return c;
}

void fill(const MapSample& m, filreg_map_sample* out) {
  out->input = m.input;
  out->output = m.output;
  out->band_crossings = m.band_crossings;
  out->x_exit = m.x_exit;
  out->x_level = m.x_level;
  out->t = m.t;
  out->log_derivative = m.log_derivative;
}

}  // namespace

extern "C" {

FILREG_API const char* filreg_version(void) { return "0.1.0"; }
FILREG_API const char* filreg_last_error(void) { return g_last_error.c_str(); }
FILREG_API const char* filreg_error_name(int code) {
  if (code < 0 || code > static_cast<int>(Errc::Internal)) return "unknown";
  return errc_name(static_cast<Errc>(code));
}

// ---------------------------------------------------------------- phi

FILREG_API int filreg_phi_family(int m, filreg_phi** out) {
  return guarded([&] {
    need(out);
    *out = new filreg_phi{phi_family(m)};
  });
}

FILREG_API void filreg_phi_free(filreg_phi* phi) { delete phi; }

FILREG_API int filreg_phi_degree(const filreg_phi* phi, int* degree) {
  return guarded([&] {
    need(phi, degree);
    *degree = phi->phi.poly().degree();
  });
}

FILREG_API int filreg_phi_coefficient(const filreg_phi* phi, int power, char* buf, size_t len) {
  return guarded([&] {
    need(phi);
    if (power < 0) fail(Errc::InvalidArgument, "negative power");
    copy_string(phi->phi.poly().coeff(power).get_str(), buf, len);
  });
}

FILREG_API int filreg_phi_eval(const filreg_phi* phi, double s, int order, double* out) {
  return guarded([&] {
    need(phi, out);
    if (order < 0) fail(Errc::InvalidArgument, "negative derivative order");
    *out = order == 0 ? phi->phi(s) : phi->phi.derivative(s, order);
  });
}

FILREG_API int filreg_phi_bracket_constant(const filreg_phi* phi, int theorem_n, double* out) {
  return guarded([&] {
    need(phi, out);
    *out = phi->phi.bracket_constant(theorem_n);
  });
}

FILREG_API int filreg_phi_check(const filreg_phi* phi, filreg_phi_report* out) {
  return guarded([&] {
    need(phi, out);
    PhiInvariantReport r = phi->phi.check_invariants();
    out->endpoint_values = r.endpoint_values;
    out->vanishing_derivatives = r.vanishing_derivatives;
    out->nonvanishing_top = r.nonvanishing_top;
    out->odd = r.odd;
    out->monotone = r.monotone;
    out->n_class = phi->phi.n_class();
  });
}

// ---------------------------------------------------------------- systems

FILREG_API int filreg_scenario(const char* name, int k, double alpha, double vartheta,
                               filreg_system** out) {
  return guarded([&] {
    need(name, out);
    *out = new filreg_system{scenario_by_name(name, k, alpha, vartheta)};
  });
}

FILREG_API int filreg_system_from_text(const char* text, filreg_system** out) {
  return guarded([&] {
    need(text, out);
    auto sec = parse_poly_sections(text);
    auto get = [&](const char* key) {
      auto it = sec.find(key);
      if (it == sec.end()) fail(Errc::ParseError, std::string("missing section [") + key + "]");
      return it->second;
    };
    FilippovSystem z;
    z.plus = PlanarField(get("plus.x1"), get("plus.x2"));
    z.minus = PlanarField(get("minus.x1"), get("minus.x2"));
    if (sec.count("h")) z.h = SwitchingFunction(sec["h"]);
    z.name = "custom";
    *out = new filreg_system{std::move(z)};
  });
}

FILREG_API void filreg_system_free(filreg_system* z) { delete z; }

FILREG_API int filreg_system_name(const filreg_system* z, char* buf, size_t len) {
  return guarded([&] {
    need(z);
    copy_string(z->z.name, buf, len);
  });
}

FILREG_API int filreg_system_eval(const filreg_system* z, int side, double x, double y,
                                  double out[2]) {
  return guarded([&] {
    need(z, out);
    if (side != 1 && side != -1) fail(Errc::InvalidArgument, "side must be +1 or -1");
    Vec2 v = side > 0 ? z->z.plus(x, y) : z->z.minus(x, y);
    out[0] = v[0];
    out[1] = v[1];
  });
}

FILREG_API int filreg_contact(const filreg_system* z, double x, double y, int max_order,
                              int* multiplicity, int* visible) {
  return guarded([&] {
    need(z, multiplicity, visible);
    ContactInfo c = contact_classification(z->z.plus, z->z.h, x, y, max_order);
    *multiplicity = c.multiplicity;
    *visible = c.visible;
  });
}

FILREG_API int filreg_classify(const filreg_system* z, double x, double y, int* region) {
  return guarded([&] {
    need(z, region);
    *region = static_cast<int>(classify_sigma_point(z->z, x, y));
  });
}

FILREG_API int filreg_sliding_field(const filreg_system* z, double x, double y, double out[2]) {
  return guarded([&] {
    need(z, out);
    Vec2 v = sliding_field(z->z, x, y);
    out[0] = v[0];
    out[1] = v[1];
  });
}

FILREG_API int filreg_regularized_eval(const filreg_system* z, const filreg_phi* phi,
                                       int theorem_n, double eps, double x, double y,
                                       double out[2]) {
  return guarded([&] {
    need(z, phi, out);
    RegularizedField rf(z->z, phi->phi, eps, theorem_n);
    Vec2 v = rf(x, y);
    out[0] = v[0];
    out[1] = v[1];
  });
}

// ---------------------------------------------------------------- parameters

FILREG_API filreg_params filreg_params_default(int theorem_n, double eps) {
  filreg_params p;
  p.theorem_n = theorem_n;
  p.eps = eps;
  p.rho = 0.3;
  p.theta = 0.3;
  p.lambda = 0.0;
  p.yhat0 = 0.9;
  p.L = 0.0;
  p.rtol = 1e-10;
  p.atol = 1e-12;
  p.t_max = 1e3;
  return p;
}

FILREG_API double filreg_lambda_star(int k, int theorem_n) { return lambda_star(k, theorem_n); }

// ---------------------------------------------------------------- flows

FILREG_API int filreg_simulate(const filreg_system* z, const filreg_phi* phi,
                               const filreg_params* p, double x0, double y0, double spacing,
                               filreg_trajectory** out) {
  return guarded([&] {
    need(out);
    TransitionConfig c = transition_of(z, phi, p);
    RegularizedField rf = make_regularized(c);
    HybridConfig hc;
    hc.ode = c.ode;
    hc.t_max = c.t_max;
    hc.window = z->z.plus.domain;
    hc.sample_spacing = std::max(0.0, spacing);
    *out = new filreg_trajectory{hybrid_flow(rf, x0, y0, {}, hc)};
  });
}

FILREG_API void filreg_trajectory_free(filreg_trajectory* t) { delete t; }
FILREG_API size_t filreg_trajectory_size(const filreg_trajectory* t) {
  return t ? t->r.samples.size() : 0;
}

FILREG_API int filreg_trajectory_sample(const filreg_trajectory* t, size_t i, double out[3]) {
  return guarded([&] {
    need(t, out);
    if (i >= t->r.samples.size()) fail(Errc::OutOfRange, "sample index out of range");
    std::copy(t->r.samples[i].begin(), t->r.samples[i].end(), out);
  });
}

FILREG_API size_t filreg_trajectory_event_count(const filreg_trajectory* t) {
  return t ? t->r.hits.size() : 0;
}

FILREG_API int filreg_trajectory_event(const filreg_trajectory* t, size_t i, filreg_event* out) {
  return guarded([&] {
    need(t, out);
    if (i >= t->r.hits.size()) fail(Errc::OutOfRange, "event index out of range");
    const HybridHit& h = t->r.hits[i];
    *out = {h.t, h.x, h.y, h.id, h.direction, h.graze};
  });
}

FILREG_API int filreg_trajectory_status(const filreg_trajectory* t, char* buf, size_t len) {
  return guarded([&] {
    need(t);
    copy_string(hybrid_status_name(t->r.status), buf, len);
  });
}

// ---------------------------------------------------------------- transition maps

FILREG_API int filreg_x_epsilon(const filreg_system* z, const filreg_phi* phi,
                                const filreg_params* p, double* out) {
  return guarded([&] {
    need(out);
    *out = find_x_epsilon(transition_of(z, phi, p));
  });
}

FILREG_API int filreg_psi(const filreg_system* z, const filreg_phi* phi, const filreg_params* p,
                          double* out) {
  return guarded([&] {
    need(out);
    *out = tangency_curve_psi(transition_of(z, phi, p));
  });
}

FILREG_API int filreg_scaling_sweep(const filreg_system* z, const filreg_phi* phi,
                                    const filreg_params* p, const double* eps, size_t count,
                                    int workers, double* x_eps, double* psi) {
  return guarded([&] {
    need(eps, x_eps, psi);
    std::vector<double> e(eps, eps + count);
    auto rows = scaling_sweep(transition_of(z, phi, p), e, workers);
    // Rows come back sorted by eps; restore the caller's order.
    std::vector<size_t> order(count);
    std::iota(order.begin(), order.end(), size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) { return e[a] < e[b]; });
    for (size_t i = 0; i < count; ++i) {
      x_eps[order[i]] = rows[i].x_eps;
      psi[order[i]] = rows[i].psi;
    }
  });
}

FILREG_API int filreg_upper_map(const filreg_system* z, const filreg_phi* phi,
                                const filreg_params* p, double y, filreg_map_sample* out) {
  return guarded([&] {
    need(out);
    fill(upper_transition_map(transition_of(z, phi, p), y), out);
  });
}

FILREG_API int filreg_lower_map(const filreg_system* z, const filreg_phi* phi,
                                const filreg_params* p, double x, filreg_map_sample* out) {
  return guarded([&] {
    need(out);
    fill(lower_transition_map(transition_of(z, phi, p), x), out);
  });
}

FILREG_API int filreg_mirror_map(const filreg_system* z, const filreg_phi* phi,
                                 const filreg_params* p, double x, double* out) {
  return guarded([&] {
    need(out);
    *out = mirror_map(transition_of(z, phi, p), x);
  });
}

FILREG_API int filreg_y_rho_lambda(const filreg_system* z, const filreg_phi* phi,
                                   const filreg_params* p, double* out) {
  return guarded([&] {
    need(out);
    *out = y_rho_lambda(transition_of(z, phi, p));
  });
}

FILREG_API int filreg_predicted_targets(const filreg_system* z, const filreg_phi* phi,
                                        const filreg_params* p, filreg_targets* out) {
  return guarded([&] {
    need(out);
    PredictedTargets t = predicted_targets(transition_of(z, phi, p));
    *out = {t.y_theta, t.y_rho_lambda, t.ybar_theta, t.ybar_minus_rho, t.beta_hat, t.x_eps};
  });
}

// ---------------------------------------------------------------- slow manifold

FILREG_API int filreg_slow_manifold(const filreg_system* z, const filreg_phi* phi,
                                    const filreg_params* p, double K, int points, double* x,
                                    double* m0, double* m1, double* proxy, double* lower,
                                    double* K_min, int* all_hold, int* upper_all_hold) {
  return guarded([&] {
    need(x, m0, m1, proxy, lower, K_min, all_hold, upper_all_hold);
    TransitionConfig c = transition_of(z, phi, p);
    RegularizedField rf = make_regularized(c);
    const double L = effective_L(c);
    SandwichReport r = slow_manifold_sandwich_check(rf, L, effective_lambda(c), std::max(K, 0.0),
                                                    points, c.ode);
    for (int i = 0; i < points; ++i) {
      x[i] = r.rows[i].x;
      m0[i] = r.rows[i].m0;
      m1[i] = r.rows[i].m1;
      proxy[i] = r.rows[i].m_proxy;
      lower[i] = r.rows[i].lower_bound;
    }
    *K_min = r.K_min;
    *all_hold = r.all_hold;
    *upper_all_hold = r.upper_all_hold;
  });
}

FILREG_API int filreg_critical_manifold(const filreg_system* z, const filreg_phi* phi,
                                        const filreg_params* p, double x, double* m0,
                                        double* m1) {
  return guarded([&] {
    need(m0, m1);
    TransitionConfig c = transition_of(z, phi, p);
    RegularizedField rf = make_regularized(c);
    CriticalManifold cm(rf, effective_L(c));
    *m0 = cm.m0(x);
    *m1 = cm.m1(x);
  });
}

FILREG_API int filreg_limit_coefficient(const filreg_system* z, const filreg_phi* phi,
                                        const filreg_params* p, double* out) {
  return guarded([&] {
    need(out);
    TransitionConfig c = transition_of(z, phi, p);
    RegularizedField rf = make_regularized(c);
    *out = CriticalManifold(rf, effective_L(c)).limit_coefficient();
  });
}

// ---------------------------------------------------------------- blow-up

FILREG_API int filreg_chart(const filreg_system* z, const filreg_phi* phi, int k, int theorem_n,
                            filreg_chart_report* out) {
  return guarded([&] {
    need(z, phi, out);
    BlowupParams bp = blowup_params_from(z->z, k, theorem_n, phi->phi);
    EtaReport e = eta_from_chart(bp);
    ChartConstants c = chart1_equilibrium(bp);
    out->k = k;
    out->theorem_n = theorem_n;
    out->alpha = bp.alpha;
    out->sigma = e.sigma;
    out->c_x = e.c_x;
    out->c_y = c.c_y;
    out->u_star = e.u_star;
    out->u_star_check = e.u_star_check;
    out->eta = e.eta;
    out->x1_star = c.x1_star;
    out->lambda1 = c.lambda1;
    out->residual = c.residual;
    out->lambda1_numeric = c.lambda1_numeric;
  });
}

// ---------------------------------------------------------------- cycles

FILREG_API int filreg_polyline_create(const double* x, const double* y, size_t count,
                                      filreg_polyline** out) {
  return guarded([&] {
    need(x, y, out);
    Polyline p(count);
    for (size_t i = 0; i < count; ++i) p[i] = {x[i], y[i]};
    *out = new filreg_polyline{std::move(p)};
  });
}

FILREG_API void filreg_polyline_free(filreg_polyline* p) { delete p; }
FILREG_API size_t filreg_polyline_size(const filreg_polyline* p) { return p ? p->p.size() : 0; }

FILREG_API int filreg_polyline_point(const filreg_polyline* p, size_t i, double out[2]) {
  return guarded([&] {
    need(p, out);
    if (i >= p->p.size()) fail(Errc::OutOfRange, "point index out of range");
    out[0] = p->p[i][0];
    out[1] = p->p[i][1];
  });
}

FILREG_API int filreg_hausdorff(const filreg_polyline* a, const filreg_polyline* b, double* out) {
  return guarded([&] {
    need(a, b, out);
    *out = hausdorff_distance(a->p, b->p);
  });
}

FILREG_API int filreg_boundary_cycle_curve(int k, double max_segment, filreg_polyline** out) {
  return guarded([&] {
    need(out);
    *out = new filreg_polyline{boundary_cycle_polyline(k, max_segment)};
  });
}

FILREG_API int filreg_boundary_cycle_period(const filreg_system* z, double* out) {
  return guarded([&] {
    need(z, out);
    *out = boundary_cycle_period(z->z);
  });
}

FILREG_API int filreg_find_cycle(const filreg_system* z, const filreg_phi* phi,
                                 const filreg_params* p, int direction, filreg_cycle_result* out,
                                 filreg_polyline** cycle) {
  return guarded([&] {
    need(out);
    CycleConfig c = cycle_of(z, phi, p, direction);
    auto w = cycle_window(c);
    CycleResult r = find_cycle(c, w[0], w[1]);
    out->window_lo = w[0];
    out->window_hi = w[1];
    out->fixed_point = r.fixed_point;
    out->period = r.period;
    out->multiplier = r.multiplier;
    out->log_multiplier = r.log_multiplier;
    out->multiplier_fd = r.multiplier_fd;
    out->fd_resolution = r.fd_resolution;
    out->fd_resolved = r.fd_resolved;
    out->converged = r.converged;
    out->evaluations = r.evaluations;
    if (cycle) *cycle = new filreg_polyline{std::move(r.cycle)};
  });
}

FILREG_API int filreg_return_map(const filreg_system* z, const filreg_phi* phi,
                                 const filreg_params* p, int direction, double y, double* out,
                                 double* period) {
  return guarded([&] {
    need(out);
    ReturnSample s = return_map(cycle_of(z, phi, p, direction), y);
    *out = s.y_out;
    if (period) *period = s.period;
  });
}

// ---------------------------------------------------------------- fits

FILREG_API int filreg_fit_scaling(const double* eps, const double* q, size_t count,
                                  double predicted, filreg_fit* out) {
  return guarded([&] {
    need(eps, q, out);
    std::vector<std::pair<double, double>> pairs;
    for (size_t i = 0; i < count; ++i) pairs.emplace_back(eps[i], q[i]);
    ScalingFit f = fit_scaling(pairs, predicted);
    *out = {f.slope, f.intercept, f.r2, f.predicted, f.rel_dev};
  });
}

FILREG_API int filreg_linear_fit(const double* x, const double* y, size_t count, filreg_fit* out) {
  return guarded([&] {
    need(x, y, out);
    LinearFit f = linear_fit(std::vector<double>(x, x + count), std::vector<double>(y, y + count));
    *out = {f.slope, f.intercept, f.r2, 0.0, 0.0};
  });
}

}  // extern "C"
