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

#include "transition_maps.hpp"

#include <algorithm>
#include <atomic>
#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "error.hpp"

namespace filreg {

double lambda_star(int k, int theorem_n) {
  return static_cast<double>(theorem_n) / (1.0 + 2.0 * k * (theorem_n - 1));
}

RegularizedField make_regularized(const TransitionConfig& cfg) {
  if (cfg.theorem_n < 2) fail(Errc::InvalidArgument, "theorem n must be >= 2");
  return RegularizedField(cfg.z, cfg.phi, cfg.eps, cfg.theorem_n);
}

double effective_lambda(const TransitionConfig& cfg) {
  if (cfg.lambda > 0.0) return cfg.lambda;
  RegularizedField rf = make_regularized(cfg);
  return 0.5 * lambda_star(rf.k(), cfg.theorem_n);
}

double effective_L(const TransitionConfig& cfg) {
  if (cfg.L > 0.0) return cfg.L;
  return default_window_L(make_regularized(cfg));
}

double find_x_epsilon(const TransitionConfig& cfg) {
  RegularizedField rf = make_regularized(cfg);
  FastSystem fs(rf);
  const double L = cfg.L > 0.0 ? cfg.L : default_window_L(rf);
  CriticalManifold cm(rf, L);
  using Ode = Dop853<2>;
  Ode ode([&fs](double, const Ode::State& s, Ode::State& d) {
            Vec2 v = fs(s[0], s[1]);
            d = {v[0], v[1]};
          },
          cfg.ode);
  std::vector<Ode::Event> ev{{[](double, const Ode::State& s) { return s[1] - 1.0; }, +1, true, 0}};
  auto r = ode.solve(0.0, {-L, cm.m0(-L)}, cfg.t_max / cfg.eps, ev);
  if (r.status != OdeStatus::Event)
    fail(Errc::NoExit, "fast trajectory did not reach yhat = 1");
  return r.y[0];
}

double tangency_curve_psi(const TransitionConfig& cfg) {
  RegularizedField rf = make_regularized(cfg);
  const double e = cfg.eps;
  auto f = [&](double x) { return rf.f(x, e); };
  if (f(0.0) == 0.0) return 0.0;
  const double b = std::pow(10.0 * e, 1.0 / (2 * rf.k() - 1));
  double fa = f(-b), fb = f(b);
  if (fa * fb > 0) fail(Errc::NoRoot, "X2+(x, eps) has no sign change near the origin");
  boost::uintmax_t it = 300;
  auto tol = [](double u, double v) { return std::abs(u - v) <= 1e-16 * std::max(std::abs(u), std::abs(v)); };
  auto r = boost::math::tools::toms748_solve(f, -b, b, fa, fb, tol, it);
  return std::abs(f(r.first)) <= std::abs(f(r.second)) ? r.first : r.second;
}

namespace {

HybridConfig map_flow_config(const TransitionConfig& cfg) {
  HybridConfig h;
  h.ode = cfg.ode;
  h.t_max = cfg.t_max;
  h.window = cfg.z.plus.domain;
  return h;
}

void check_map_status(const HybridResult& r) {
  switch (r.status) {
    case HybridStatus::Section: return;
    case HybridStatus::LeftWindow: fail(Errc::LeftWindow, "trajectory left the canonical window");
    case HybridStatus::StepUnderflow: fail(Errc::StepSizeUnderflow, "step size underflow");
    default: fail(Errc::NoCrossing, std::string("target section not reached: ") + hybrid_status_name(r.status));
  }
}

double first_hit_x(const HybridResult& r, int id) {
  for (const auto& h : r.hits)
    if (h.id == id && !h.graze) return h.x;
  return std::nan("");
}

}  // namespace

MapSample upper_transition_map(const TransitionConfig& cfg, double y) {
  if (y < cfg.eps) fail(Errc::InvalidArgument, "upper map input below y = eps");
  RegularizedField rf = make_regularized(cfg);
  HybridConfig hc = map_flow_config(cfg);
  std::vector<Section> sec{{SectionKind::Vertical, cfg.theta, +1, true, 0}};
  HybridResult r = hybrid_flow(rf, -cfg.rho, y, sec, hc);
  check_map_status(r);
  MapSample m;
  m.input = y;
  m.output = r.y;
  m.band_crossings = r.top_entries + r.top_exits;
  m.x_exit = first_hit_x(r, kTopExit);
  m.t = r.t;
  m.log_jac = r.log_jac;
  m.log_derivative = r.log_jac + std::log(std::abs(rf(-cfg.rho, y)[0] / rf(cfg.theta, r.y)[0]));
  return m;
}

MapSample lower_transition_map(const TransitionConfig& cfg, double x) {
  RegularizedField rf = make_regularized(cfg);
  HybridConfig hc = map_flow_config(cfg);
  hc.terminal_boundaries = kStopBottomExit;
  std::vector<Section> sec{{SectionKind::Vertical, cfg.theta, +1, true, 0},
                           {SectionKind::Horizontal, cfg.yhat0 * cfg.eps, +1, false, 1}};
  HybridResult r = hybrid_flow(rf, x, -cfg.eps, sec, hc);
  if (r.status == HybridStatus::Boundary)
    fail(Errc::SlidingCapture, "trajectory re-entered y < -eps");
  check_map_status(r);
  MapSample m;
  m.input = x;
  m.output = r.y;
  m.band_crossings = r.top_entries + r.top_exits;
  m.x_exit = first_hit_x(r, kTopExit);
  m.x_level = first_hit_x(r, 1);
  m.t = r.t;
  m.log_jac = r.log_jac;
  m.log_derivative = r.log_jac + std::log(std::abs(rf(x, -cfg.eps)[1] / rf(cfg.theta, r.y)[0]));
  return m;
}

double ybar(const TransitionConfig& cfg, double x) {
  if (x == 0.0) return 0.0;
  HybridConfig hc = map_flow_config(cfg);
  hc.time_sign = x > 0 ? 1.0 : -1.0;
  std::vector<Section> sec{{SectionKind::Vertical, x, x > 0 ? +1 : -1, true, 0}};
  HybridResult r = smooth_flow(cfg.z.plus, 0.0, 0.0, sec, hc);
  check_map_status(r);
  return r.y;
}

double y_rho_lambda(const TransitionConfig& cfg) {
  const double lam = effective_lambda(cfg);
  if (!(std::pow(cfg.eps, lam) < cfg.rho)) fail(Errc::InvalidArgument, "need eps^lambda < rho");
  HybridConfig hc = map_flow_config(cfg);
  hc.time_sign = -1.0;
  std::vector<Section> sec{{SectionKind::Vertical, -cfg.rho, -1, true, 0}};
  HybridResult r = smooth_flow(cfg.z.plus, -std::pow(cfg.eps, lam), cfg.eps, sec, hc);
  check_map_status(r);
  return r.y;
}

PredictedTargets predicted_targets(const TransitionConfig& cfg) {
  RegularizedField rf = make_regularized(cfg);
  const int k = rf.k();
  const double alpha = leading_alpha(rf);
  const double lam = effective_lambda(cfg);
  PredictedTargets p;
  p.ybar_theta = ybar(cfg, cfg.theta);
  p.ybar_minus_rho = ybar(cfg, -cfg.rho);
  p.x_eps = find_x_epsilon(cfg);
  p.y_rho_lambda_measured = y_rho_lambda(cfg);
  // beta from y^eps_{rho,lambda} - ybar_{-rho} - eps ~ beta eps^(2k lambda),
  // least squares through the origin over five eps values.
  double num = 0.0, den = 0.0;
  for (double f : {1.0, 0.5, 0.25, 0.125, 0.0625}) {
    TransitionConfig c = cfg.with_eps(cfg.eps * f);
    c.lambda = lam;
    const double d = y_rho_lambda(c) - p.ybar_minus_rho - c.eps;
    const double s = std::pow(c.eps, 2.0 * k * lam);
    num += d * s;
    den += s * s;
  }
  p.beta_hat = num / den;
  p.y_theta = p.ybar_theta + cfg.eps - alpha / (2.0 * k) * std::pow(p.x_eps, 2.0 * k);
  p.y_rho_lambda = p.ybar_minus_rho + cfg.eps + p.beta_hat * std::pow(cfg.eps, 2.0 * k * lam);
  return p;
}

double mirror_map(const TransitionConfig& cfg, double x) {
  RegularizedField rf = make_regularized(cfg);
  if (rf.f(x, cfg.eps) >= 0.0) {
    const double psi = tangency_curve_psi(cfg);
    if (std::abs(x - psi) <= 1e-12 * (1.0 + std::abs(psi))) return x;
    fail(Errc::InvalidArgument, "mirror map needs x <= psi(eps)");
  }
  HybridConfig hc = map_flow_config(cfg);
  hc.terminal_boundaries = kStopTopExit | kStopBottomExit;
  HybridResult r = hybrid_flow(rf, x, cfg.eps, {}, hc);
  if (r.status == HybridStatus::Boundary && r.stop_id == kTopExit) return r.x;
  if (r.status == HybridStatus::LeftWindow) fail(Errc::LeftWindow, "trajectory left the window");
  fail(Errc::NoReturn, "orbit did not return to y = eps");
}

std::vector<double> log_grid(double lo, double hi, int points) {
  if (!(lo > 0 && hi > lo) || points < 2) fail(Errc::InvalidArgument, "bad log grid");
  std::vector<double> g(points);
  for (int i = 0; i < points; ++i) g[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

std::vector<ScalingRow> scaling_sweep(const TransitionConfig& cfg, const std::vector<double>& eps,
                                      int workers) {
  std::vector<ScalingRow> rows(eps.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex mu;
  auto work = [&] {
    while (true) {
      const std::size_t i = next++;
      if (i >= eps.size()) return;
      try {
        TransitionConfig c = cfg.with_eps(eps[i]);
        rows[i] = {eps[i], find_x_epsilon(c), tangency_curve_psi(c)};
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!err) err = std::current_exception();
      }
    }
  };
  const int n = std::max(1, std::min<int>(workers, static_cast<int>(eps.size())));
  if (n == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < n; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (err) std::rethrow_exception(err);
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.eps < b.eps; });
  return rows;
}

}  // namespace filreg
