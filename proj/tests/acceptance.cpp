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

// Acceptance suite.  One PASS/FAIL line per criterion; indented lines are the
// measurements behind it.  Exit status: 0 when the failing set equals
// kKnownInfeasible, 1 otherwise.  FILREG_ACCEPTANCE_STRICT=1 makes any
// failure fatal.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <future>
#include <set>
#include <string>
#include <vector>

#include "blowup.hpp"
#include "cycles.hpp"
#include "error.hpp"
#include "fit.hpp"
#include "regularize.hpp"
#include "scenarios.hpp"
#include "transition_maps.hpp"

using namespace filreg;

namespace {

namespace tol {
constexpr double kScalingSlope = 0.05;       // relative
constexpr double kScalingR2 = 0.999;
constexpr double kScalingSeconds = 120.0;    // per (k, n)
constexpr double kCrossingFactor = 1e3;      // crossing tolerance = factor (rtol |x| + atol)
constexpr double kEta = 0.10;                // relative
constexpr double kPsiSlope = 0.02;           // relative
constexpr double kContractionR2 = 0.99;
constexpr double kContractionBound = 1e-10;  // diameter / input length
constexpr double kExact = 1e-8;
constexpr double kLimitCoefficient = 0.02;   // relative
constexpr double kCurveResidual = 1e-12;
constexpr double kDivergence = 1e-10;
constexpr double kPeriodQuadrature = 1e-6;   // relative
constexpr double kBracketSpread = 1e-8;
constexpr double kMultiplier = 0.15;         // relative to exp(-2kT)
constexpr double kHausdorffFactor = 2.0;
constexpr double kCycleSeconds = 300.0;
constexpr double kReflectionK1 = 0.01;
constexpr double kReflectionK2 = 0.02;
constexpr double kMirrorFixedPoint = 1e-10;  // 100 x event tolerance
constexpr double kContactExponent = 0.025;   // relative to 2k
constexpr double kKappaRatio = 0.05;
}  // namespace tol

// Criteria expected to fail; see README.
const std::set<int> kKnownInfeasible{8};

struct Report {
  bool pass = true;
  std::vector<std::string> lines;

  void note(const char* fmt, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, ap);
    va_end(ap);
    lines.push_back(buf);
  }
  // Records a clause; returns ok.
  bool check(bool ok, const char* fmt, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, ap);
    va_end(ap);
    lines.push_back(std::string(ok ? "ok   " : "FAIL ") + buf);
    pass = pass && ok;
    return ok;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Poly2 minus_one() { return Poly2::constant(Rational(-1)); }

IntegratorConfig tight() {
  IntegratorConfig o;
  o.rtol = 1e-12;
  o.atol = 1e-14;
  return o;
}

TransitionConfig canonical(int k, int n, double eps, Poly2 vartheta = Poly2()) {
  return TransitionConfig(canonical_system(k, 1.0, Poly1(), std::move(vartheta)), phi_family(n - 1), n,
                          eps);
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// ---------------------------------------------------------------- 1 and 2

struct ScalingResult {
  ScalingFit fit;
  std::vector<ScalingRow> rows;
  double seconds = 0.0;
};

ScalingResult scaling(int k, int n) {
  const auto t0 = std::chrono::steady_clock::now();
  ScalingResult r;
  r.rows = scaling_sweep(canonical(k, n, 1e-3), log_grid(1e-6, 1e-2, 9), 1);
  std::vector<std::pair<double, double>> pairs;
  for (const auto& row : r.rows) pairs.push_back({row.eps, row.x_eps});
  r.fit = fit_scaling(pairs, static_cast<double>(n) / (1.0 + 2.0 * k * (n - 1)));
  r.seconds = seconds_since(t0);
  return r;
}

Report scaling_exponent() {
  Report rep;
  for (auto [k, n] : std::vector<std::pair<int, int>>{{1, 2}, {1, 3}, {2, 3}, {2, 6}}) {
    ScalingResult s = scaling(k, n);
    const double target = static_cast<double>(n) / (1.0 + 2.0 * k * (n - 1));
    rep.check(rel(s.fit.slope, target) <= tol::kScalingSlope && s.fit.r2 >= tol::kScalingR2 &&
                  s.seconds <= tol::kScalingSeconds,
              "(k,n)=(%d,%d) slope %.6f target %.6f dev %.2e r2 %.7f time %.2fs", k, n, s.fit.slope,
              target, rel(s.fit.slope, target), s.fit.r2, s.seconds);
    // the start point -L must not matter
    for (double eps : {1e-2, 1e-6}) {
      TransitionConfig c = canonical(k, n, eps);
      const double x1 = find_x_epsilon(c);
      c.L = 2.0 * effective_L(c);
      const double x2 = find_x_epsilon(c);
      const double t = tol::kCrossingFactor * (c.ode.rtol * std::abs(x1) + c.ode.atol);
      rep.check(std::abs(x2 - x1) <= t, "(k,n)=(%d,%d) eps %.0e: x_eps shift %.2e when L doubles (tolerance %.1e)", k,
                n, eps, std::abs(x2 - x1), t);
    }
  }
  return rep;
}

Report eta_cross_check() {
  Report rep;
  for (auto [k, n] : std::vector<std::pair<int, int>>{{1, 2}, {2, 3}}) {
    ScalingResult s = scaling(k, n);
    const double fitted = std::exp(s.fit.intercept);
    TransitionConfig c = canonical(k, n, 1e-3);
    EtaReport e = eta_from_chart(blowup_params_from(c.z, k, n, c.phi));
    rep.check(rel(fitted, e.eta) <= tol::kEta, "(k,n)=(%d,%d) exp(intercept) %.6f  c_x*u* %.6f  dev %.3f",
              k, n, fitted, e.eta, rel(fitted, e.eta));
  }
  return rep;
}

// ---------------------------------------------------------------- 3

Report tangency_exponent() {
  Report rep;
  const int k = 2, n = 3;
  const auto t0 = std::chrono::steady_clock::now();
  auto rows = scaling_sweep(canonical(k, n, 1e-3, minus_one()), log_grid(1e-6, 1e-2, 9), 1);
  std::vector<std::pair<double, double>> pairs;
  bool above = true;
  double worst = 1e300;
  for (const auto& r : rows) {
    pairs.push_back({r.eps, r.psi});
    above = above && r.x_eps > r.psi;
    worst = std::min(worst, r.x_eps - r.psi);
  }
  ScalingFit f = fit_scaling(pairs, 1.0 / (2 * k - 1));
  rep.check(f.rel_dev <= tol::kPsiSlope, "k=2 psi slope %.8f target %.8f dev %.2e r2 %.9f", f.slope,
            f.predicted, f.rel_dev, f.r2);
  rep.check(above, "x_eps > psi at all 9 eps, min gap %.4e", worst);
  rep.note("time %.2fs", seconds_since(t0));
  return rep;
}

// ---------------------------------------------------------------- 4

struct MapDiameter {
  double lo = 0, hi = 0;
  double direct = 0;       // max - min of the computed outputs
  double log_variational = 0;  // log of the integral of |dU/din|
};

// log sum exp with trapezoid weights over an equispaced grid
double log_trapezoid(const std::vector<double>& logv, double h) {
  const double m = *std::max_element(logv.begin(), logv.end());
  double s = 0.0;
  for (size_t i = 0; i < logv.size(); ++i) {
    const double w = (i == 0 || i + 1 == logv.size()) ? 0.5 : 1.0;
    s += w * std::exp(logv[i] - m);
  }
  return m + std::log(s * h);
}

MapDiameter map_diameter(const TransitionConfig& c, bool upper, int samples) {
  MapDiameter d;
  if (upper) {
    d.lo = c.eps;
    d.hi = y_rho_lambda(c);
  } else {
    d.lo = -c.rho;
    d.hi = -std::pow(c.eps, c.lambda);
  }
  RegularizedField rf = make_regularized(c);
  const double h = (d.hi - d.lo) / (samples - 1);
  double mn = 1e300, mx = -1e300;
  std::vector<double> logd;
  for (int j = 0; j < samples; ++j) {
    const double in = d.lo + h * j;
    MapSample m = upper ? upper_transition_map(c, in) : lower_transition_map(c, in);
    mn = std::min(mn, m.output);
    mx = std::max(mx, m.output);
    // derivative between sections: Jacobian times normal speed in / normal speed out
    const Vec2 fin = upper ? rf(-c.rho, in) : rf(in, -c.eps);
    const double speed_in = upper ? fin[0] : fin[1];
    const double speed_out = rf(c.theta, m.output)[0];
    logd.push_back(m.log_jac + std::log(std::abs(speed_in / speed_out)));
  }
  d.direct = mx - mn;
  d.log_variational = log_trapezoid(logd, h);
  return d;
}

Report contraction() {
  Report rep;
  const double q = 0.5;
  for (bool upper : {true, false}) {
    std::vector<double> x, y;
    MapDiameter last;
    for (double eps : {1e-2, 4e-3, 1e-3}) {
      TransitionConfig c = canonical(1, 2, eps);
      c.lambda = 0.5 * lambda_star(1, 2);
      MapDiameter d = map_diameter(c, upper, 33);
      rep.note("%s eps %.0e input [%.6g, %.6g] log diam variational %.3f direct %.3e", upper ? "upper" : "lower",
               eps, d.lo, d.hi, d.log_variational, d.direct);
      x.push_back(std::pow(eps, -q));
      y.push_back(d.log_variational);
      last = d;
    }
    LinearFit f = linear_fit(x, y);
    const char* name = upper ? "upper" : "lower";
    rep.check(f.slope < 0.0 && f.r2 >= tol::kContractionR2,
              "%s log diam vs eps^-1/2: slope %.4f intercept %.3f r2 %.6f", name, f.slope, f.intercept, f.r2);
    const double len = std::abs(last.hi - last.lo);
    const double bound = tol::kContractionBound * len;
    rep.check(last.direct < bound && std::exp(last.log_variational) < bound,
              "%s eps 1e-3 diameter direct %.3e variational %.3e < %.3e", name, last.direct,
              std::exp(last.log_variational), bound);
  }
  return rep;
}

// ---------------------------------------------------------------- 5

Report exact_case() {
  Report rep;
  const double eps = 1e-3;
  for (int k : {1, 2}) {
    const int n = std::max(2, 2 * k - 1);
    TransitionConfig c = canonical(k, n, eps);
    c.ode = tight();
    if (k == 2) c.rho = c.theta = 0.5;  // keeps eps^lambda < rho
    const double alpha = 1.0, th = c.theta;
    const double yt = ybar(c, th), yt_exact = alpha * std::pow(th, 2 * k) / (2 * k);
    rep.check(std::abs(yt - yt_exact) <= tol::kExact, "k=%d ybar_theta %.15g exact %.15g", k, yt, yt_exact);

    // X+ orbit of the origin up to y = eps
    HybridConfig hc;
    hc.ode = tight();
    hc.window = c.z.plus.domain;
    HybridResult r = smooth_flow(c.z.plus, 0.0, 0.0, {{SectionKind::Horizontal, eps, +1, true, 0}}, hc);
    const double xb_exact = std::pow(2 * k * eps / alpha, 1.0 / (2 * k));
    rep.check(r.status == HybridStatus::Section && std::abs(r.x - xb_exact) <= tol::kExact,
              "k=%d xbar+_eps %.15g exact %.15g", k, r.x, xb_exact);

    const double xe = find_x_epsilon(c);
    const double predicted = alpha * std::pow(th, 2 * k) / (2 * k) - alpha * std::pow(xe, 2 * k) / (2 * k) + eps;
    MapDiameter d = map_diameter(c, true, 9);
    double worst = 0.0;
    for (int j = 0; j < 9; ++j) {
      const double in = d.lo + (d.hi - d.lo) * j / 8;
      worst = std::max(worst, std::abs(upper_transition_map(c, in).output - predicted));
    }
    rep.check(worst <= tol::kExact + d.direct, "k=%d upper map vs closed form: max err %.3e (width %.3e, x_eps %.6g)",
              k, worst, d.direct, xe);
  }
  return rep;
}

// ---------------------------------------------------------------- 6

Report transition_family() {
  Report rep;
  // independent exact evaluation of the closed forms from the coefficients
  auto deriv_at = [](const Poly1& p, int order, int s) {
    Poly1 d = p;
    for (int i = 0; i < order; ++i) d = d.derivative();
    return d.eval(Rational(s));
  };
  for (int m = 1; m <= 6; ++m) {
    TransitionFunction phi = phi_family(m);
    const Poly1& p = phi.poly();
    bool ends = p.eval(Rational(1)) == Rational(1) && p.eval(Rational(-1)) == Rational(-1);
    bool flat = true;
    for (int i = 1; i <= m; ++i) flat = flat && deriv_at(p, i, 1) == 0 && deriv_at(p, i, -1) == 0;
    bool top = deriv_at(p, m + 1, 1) != 0 && deriv_at(p, m + 1, -1) != 0;
    // phi' > 0 inside: phi' = c (1 - s^2)^m with c > 0 for this family
    Poly1 d1 = p.derivative();
    Poly1 base({Rational(1), Rational(0), Rational(-1)}), pw({Rational(1)});
    for (int i = 0; i < m; ++i) pw = pw * base;
    const Rational cst = d1.coeff(0);
    bool positive = cst > 0 && (d1 - pw * cst).degree() < 0;
    PhiInvariantReport inv = phi.check_invariants();
    rep.check(ends && flat && top && positive && inv.all(), "m=%d endpoints %d flat %d top %d phi'>0 %d library %d", m,
              ends, flat, top, positive, inv.all());
  }
  const Rational c6 = phi_family(6).poly().coeff(1);
  rep.check(c6 == Rational(3003, 1024), "phi_6 coefficient of s: %s", c6.get_str().c_str());
  return rep;
}

// ---------------------------------------------------------------- 7

Report critical_manifold() {
  Report rep;
  const int k = 1, n = 2;
  TransitionConfig c = canonical(k, n, 1e-4);
  RegularizedField rf = make_regularized(c);
  CriticalManifold cm(rf, 0.5);
  // 1 - m0(x) ~ C |x|^((2k-1)/n)
  std::vector<double> lx, ly;
  for (double a : log_grid(1e-12, 1e-6, 13)) {
    lx.push_back(std::log(a));
    ly.push_back(std::log(cm.m0_complement(-a)));
  }
  LinearFit f = linear_fit(lx, ly);
  // phi_1 = (3s - s^3)/2: |phi''(1)| = 3
  const double predicted = std::sqrt(2.0 * 1.0 * 2.0 / 3.0);
  const double fitted = std::exp(f.intercept);
  rep.check(rel(fitted, predicted) <= tol::kLimitCoefficient,
            "limit fit slope %.6f coefficient %.6f predicted %.6f dev %.2e", f.slope, fitted, predicted,
            rel(fitted, predicted));

  const double lambda = 0.5;
  SandwichReport probe = slow_manifold_sandwich_check(rf, 0.5, lambda, 0.0, 50);
  SandwichReport at = slow_manifold_sandwich_check(rf, 0.5, lambda, probe.K_min * (1 + 1e-9), 50);
  bool lower = at.rows.size() == 50, upper = at.rows.size() == 50;
  for (const auto& r : at.rows) {
    lower = lower && r.m_proxy >= r.lower_bound;
    upper = upper && r.m_proxy <= r.m0;
  }
  rep.check(lower && at.all_hold, "sandwich holds on all %zu points with K_min %.6f", at.rows.size(), probe.K_min);
  rep.check(upper && at.upper_all_hold, "m(x, eps) <= m0(x) on all %zu points", at.rows.size());
  return rep;
}

// ---------------------------------------------------------------- 8

// Closed forms of the boundary-cycle example for k = 2.
double bc_H(double x, double y) { return 1.0 - std::pow(x, 4) - std::pow(y - 1.0, 4); }
Vec2 bc_grad_H(double x, double y) { return {-4 * x * x * x, -4 * std::pow(y - 1.0, 3)}; }
Vec2 bc_field(double x, double y) {
  const double w = y - 1.0;
  return {-x * (std::pow(x, 4) - 1) + w * w * w * (x - 1 - x * y),
          x * x * x - (std::pow(x, 4) - 1 + std::pow(w, 4)) * w};
}
double bc_divergence(double x, double y) {
  const double w = y - 1.0;
  const double d1 = -5 * std::pow(x, 4) + 1 + w * w * w * (1 - y);
  const double d2 = -4 * std::pow(w, 4) - (std::pow(x, 4) - 1 + std::pow(w, 4));
  return d1 + d2;
}

struct EpsCycle {
  double eps = 0;
  CycleResult cycle;
  std::vector<double> fixed_points;
  int sign_changes = 0;
  double hausdorff = 0;
};

EpsCycle cycle_at(const FilippovSystem& z, double eps, const Polyline& gamma) {
  EpsCycle r;
  r.eps = eps;
  CycleConfig cfg = default_cycle_config(z, phi_family(5), 6, eps);
  auto w = cycle_window(cfg);
  const int m = 32;
  std::vector<double> g(m + 1);
  for (int i = 0; i <= m; ++i) {
    const double y = w[0] + (w[1] - w[0]) * i / m;
    g[i] = return_map(cfg, y).y_out - y;
  }
  int cell = -1;
  for (int i = 0; i < m; ++i)
    if ((g[i] > 0) != (g[i + 1] > 0)) {
      ++r.sign_changes;
      cell = i;
    }
  if (r.sign_changes != 1) return r;
  const double yl = w[0] + (w[1] - w[0]) * cell / m, yr = w[0] + (w[1] - w[0]) * (cell + 1) / m;
  for (int i = 0; i < 8; ++i) {
    const double a = yl - i * (yl - w[0]) / 8, b = yr + i * (w[1] - yr) / 8;
    CycleResult c = find_cycle(cfg, a, b);
    r.fixed_points.push_back(c.fixed_point);
    if (i == 0) r.cycle = c;
  }
  r.hausdorff = hausdorff_distance(r.cycle.cycle, gamma);
  return r;
}

// Fixed point search on the whole window; true when none exists.
bool no_fixed_point(const FilippovSystem& z, double eps, int direction, std::string& why) {
  CycleConfig cfg = default_cycle_config(z, phi_family(5), 6, eps);
  cfg.direction = direction;
  try {
    auto w = cycle_window(cfg);
    CycleResult c = find_cycle(cfg, w[0], w[1]);
    why = "fixed point " + std::to_string(c.fixed_point);
    return !c.converged;
  } catch (const Error& e) {
    why = errc_name(e.code());
    return true;
  }
}

Report boundary_cycle() {
  Report rep;
  const auto t0 = std::chrono::steady_clock::now();
  FilippovSystem z = boundary_cycle_example(2);
  Polyline gamma = boundary_cycle_polyline(2, 1e-3);

  double res = 0.0, div_lib = 0.0, div_cf = 0.0, hmax = 0.0, quad = 0.0;
  for (size_t i = 0; i < gamma.size(); ++i) {
    const double x = gamma[i][0], y = gamma[i][1];
    const Vec2 f = z.plus(x, y), gh = bc_grad_H(x, y);
    res = std::max(res, std::abs(f[0] * gh[0] + f[1] * gh[1]));
    div_lib = std::max(div_lib, std::abs(z.plus.divergence(x, y) + 4.0));
    div_cf = std::max(div_cf, std::abs(bc_divergence(x, y) + 4.0));
    hmax = std::max(hmax, std::abs(bc_H(x, y)));
    if (i) {
      const double xm = 0.5 * (x + gamma[i - 1][0]), ym = 0.5 * (y + gamma[i - 1][1]);
      const Vec2 fm = bc_field(xm, ym);
      quad += std::hypot(x - gamma[i - 1][0], y - gamma[i - 1][1]) / std::hypot(fm[0], fm[1]);
    }
  }
  rep.check(res <= tol::kCurveResidual && hmax <= tol::kCurveResidual,
            "invariant curve: max |X.grad H| %.2e, max |H| %.2e on %zu points", res, hmax, gamma.size());
  rep.check(div_lib <= tol::kDivergence && div_cf <= tol::kDivergence,
            "divergence on the curve: max |div + 4| %.2e (closed form %.2e)", div_lib, div_cf);
  const double T = boundary_cycle_period(z, tight());
  rep.check(rel(T, quad) <= tol::kPeriodQuadrature, "period %.10f, arc-length quadrature %.10f", T, quad);
  const double log_target = -4.0 * T;

  std::vector<double> epss{0.02, 0.01, 0.005};
  std::vector<std::future<EpsCycle>> jobs;
  for (double e : epss) jobs.push_back(std::async(std::launch::async, cycle_at, std::cref(z), e, std::cref(gamma)));
  std::vector<EpsCycle> cyc;
  for (auto& j : jobs) cyc.push_back(j.get());

  bool unique = true, below_one = true;
  double dmin = 1e300, dmax = 0.0;
  std::vector<double> gap;
  for (const auto& c : cyc) {
    double spread = 0.0;
    for (double fp : c.fixed_points) spread = std::max(spread, std::abs(fp - c.fixed_points.front()));
    const bool ok = c.sign_changes == 1 && c.fixed_points.size() == 8 && spread <= tol::kBracketSpread;
    unique = unique && ok;
    if (c.sign_changes != 1) {
      rep.note("eps %.3g: %d sign changes of P(y) - y on the window", c.eps, c.sign_changes);
      continue;
    }
    below_one = below_one && c.cycle.multiplier < 1.0;
    const double ratio = c.hausdorff / c.eps;
    dmin = std::min(dmin, ratio);
    dmax = std::max(dmax, ratio);
    gap.push_back(std::abs(c.cycle.log_multiplier - log_target));
    rep.note("eps %.3g: fixed point %.12f spread %.1e period %.6f log multiplier %.4f (target %.4f) d_H/eps %.4f",
             c.eps, c.cycle.fixed_point, spread, c.cycle.period, c.cycle.log_multiplier, log_target, ratio);
  }
  rep.check(unique, "unique fixed point, 8 brackets agree within %.0e at every eps", tol::kBracketSpread);
  rep.check(below_one, "multiplier < 1 at every eps");
  bool approaching = gap.size() == 3 && gap[2] <= gap[1] && gap[1] <= gap[0];
  const double last = cyc.back().cycle.multiplier / std::exp(log_target);
  rep.check(approaching && std::abs(last - 1.0) <= tol::kMultiplier,
            "multiplier -> exp(-4T): |log gap| %s, multiplier/exp(-4T) at eps 0.005 = %.3e",
            approaching ? "decreasing" : "not decreasing", last);
  rep.check(dmin > 0 && dmax / dmin <= tol::kHausdorffFactor, "d_H/eps in [%.4f, %.4f], factor %.3f", dmin, dmax,
            dmax / dmin);

  std::string why;
  bool none = true;
  for (double e : epss) {
    const bool a = no_fixed_point(boundary_cycle_unstable(2), e, +1, why);
    rep.note("unstable variant eps %.3g: %s", e, why.c_str());
    const bool b = no_fixed_point(time_reversed(z), e, -1, why);
    rep.note("reversed field eps %.3g: %s", e, why.c_str());
    none = none && a && b;
  }
  rep.check(none, "no fixed point for the reversed and unstable systems");
  const double secs = seconds_since(t0);
  rep.check(secs <= tol::kCycleSeconds, "runtime %.1fs", secs);
  return rep;
}

// ---------------------------------------------------------------- 9

Report mirror() {
  Report rep;
  const double eps = 1e-3;
  for (int k : {1, 2}) {
    const int n = std::max(2, 2 * k - 1);
    TransitionConfig c = canonical(k, n, eps, minus_one());
    c.ode = tight();
    const double psi = tangency_curve_psi(c);
    std::vector<double> u, d;
    for (int i = 1; i <= 12; ++i) {
      const double x = psi - eps * i / 12;
      u.push_back(x - psi);
      d.push_back(mirror_map(c, x) - psi);
    }
    const double c1 = power_fit(u, d, {0, 1, 2})[1];
    const double t = k == 1 ? tol::kReflectionK1 : tol::kReflectionK2;
    rep.check(std::abs(c1 + 1.0) <= t, "k=%d psi %.6g reflection coefficient %.7f", k, psi, c1);
    // rho(psi - v) - (psi + v) extrapolated to v = 0
    std::vector<double> v, r;
    for (double s : log_grid(1e-4 * eps, 1e-1 * eps, 12)) {
      v.push_back(s);
      r.push_back(mirror_map(c, psi - s) - (psi + s));
    }
    const double a0 = power_fit(v, r, {0, 1, 2})[0];
    rep.check(std::abs(a0) <= tol::kMirrorFixedPoint, "k=%d fixed point offset at psi %.2e", k, a0);
  }
  return rep;
}

// ---------------------------------------------------------------- 10

struct GrazingCase {
  const char* name;
  FilippovSystem z;
  TransitionFunction phi;
  int k, n;
  std::vector<double> eps;
};

Report grazing() {
  Report rep;
  std::vector<GrazingCase> cases;
  cases.push_back({"canonical k=1", canonical_system(1, 1.0, Poly1(), minus_one()), phi_family(1), 1, 2, {1e-5, 1e-6}});
  cases.push_back({"canonical k=2", canonical_system(2, 1.0, Poly1(), minus_one()), phi_family(2), 2, 3, {1e-8, 1e-9}});
  cases.push_back({"boundary-cycle k=2", boundary_cycle_example(2), phi_family(5), 2, 6, {1e-8, 1e-9}});
  for (const auto& gc : cases) {
    GrazingFit up, lo;
    double ratio = 0.0;
    for (double eps : gc.eps) {
      TransitionConfig c(gc.z, gc.phi, gc.n, eps);
      c.ode = tight();
      const double psi = tangency_curve_psi(c), xe = find_x_epsilon(c);
      GrazingFitConfig g;
      g.k = gc.k;
      g.psi = psi;
      g.exponent_delta = gc.k == 1 ? std::max(50 * std::abs(psi), std::sqrt(eps)) : 50 * std::abs(psi);
      g.kappa_delta = gc.k == 1 ? 0.5 * (xe - psi) : 20 * std::abs(psi);
      g.side = GrazingSide::Upper;
      g.exponent_target = 0.3;
      g.kappa_target = xe;
      up = grazing_fit(gc.z, eps, g, tight());
      g.side = GrazingSide::Lower;
      g.exponent_target = -0.3;
      g.kappa_target = -xe;
      lo = grazing_fit(gc.z, eps, g, tight());
      ratio = up.kappa / lo.kappa;
      rep.note("%s eps %.0e: exponent up %.4f low %.4f, kappa up %.4e low %.4e ratio %.5f", gc.name, eps,
               up.exponent, lo.exponent, up.kappa, lo.kappa, ratio);
    }
    const double e = 2.0 * gc.k;
    rep.check(rel(up.exponent, e) <= tol::kContactExponent && rel(lo.exponent, e) <= tol::kContactExponent,
              "%s contact exponent %.4f / %.4f vs %g", gc.name, up.exponent, lo.exponent, e);
    rep.check(up.kappa < 0 && lo.kappa < 0 && std::abs(ratio - 1.0) <= tol::kKappaRatio,
              "%s kappa signs negative, ratio %.5f at eps %.0e", gc.name, ratio, gc.eps.back());
  }
  return rep;
}

struct Criterion {
  int id;
  const char* name;
  std::function<Report()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> all{
      {1, "scaling exponent of x_eps", scaling_exponent},
      {2, "eta cross-check against the blow-up", eta_cross_check},
      {3, "tangency curve exponent", tangency_exponent},
      {4, "contraction of the transition maps", contraction},
      {5, "exact canonical case", exact_case},
      {6, "transition-function family", transition_family},
      {7, "critical manifold", critical_manifold},
      {8, "boundary limit cycle", boundary_cycle},
      {9, "mirror map", mirror},
      {10, "grazing half-maps", grazing},
  };
  std::set<int> failed;
  for (const auto& c : all) {
    const auto t0 = std::chrono::steady_clock::now();
    Report r;
    try {
      r = c.run();
    } catch (const std::exception& e) {
      r.check(false, "exception: %s", e.what());
    }
    for (const auto& l : r.lines) std::printf("    %s\n", l.c_str());
    std::printf("criterion %2d  %s  %s (%.1fs)\n", c.id, r.pass ? "PASS" : "FAIL", c.name, seconds_since(t0));
    std::fflush(stdout);
    if (!r.pass) failed.insert(c.id);
  }
  std::printf("\n%zu of %zu criteria pass\n", all.size() - failed.size(), all.size());
  for (int id : kKnownInfeasible)
    std::printf("criterion %d is a documented known failure (see README, \"Acceptance status\")%s\n", id,
                failed.count(id) ? "" : " but PASSED: update the known-failure list");
  const char* strict = std::getenv("FILREG_ACCEPTANCE_STRICT");
  if (strict && std::string(strict) == "1") return failed.empty() ? 0 : 1;
  return failed == kKnownInfeasible ? 0 : 1;
}
