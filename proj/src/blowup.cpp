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

#include "blowup.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "error.hpp"

namespace filreg {

namespace {

double ipow(double b, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

double odd_root(double v, int m) { return v < 0 ? -std::pow(-v, 1.0 / m) : std::pow(v, 1.0 / m); }

// Upsilon(t) = sum_{j > n} (c_j / c_n) t^(j-n-1), with c_j the Taylor
// coefficients of 1 - phi(1 + t).
Poly1 upsilon_poly(const BlowupParams& p) {
  Poly1 top = p.phi.poly().shifted(Rational(1));
  const Rational cn = -top.coeff(p.n);
  if (cn == 0) fail(Errc::ClassMismatch, "phi^(n)(1) vanishes");
  std::vector<Rational> c;
  for (int j = p.n + 1; j <= top.degree(); ++j) c.push_back(-top.coeff(j) / cn);
  return Poly1(c);
}

// g(s) / s^(2k-1).
Poly1 g_tilde(const BlowupParams& p) {
  std::vector<Rational> c;
  for (int i = 2 * p.k - 1; i <= p.g.degree(); ++i) c.push_back(p.g.coeff(i));
  return Poly1(c);
}

}  // namespace

BlowupParams blowup_params_from(const FilippovSystem& z, int k, int theorem_n,
                                const TransitionFunction& phi) {
  if (!z.plus.has_poly()) fail(Errc::InvalidArgument, "blow-up data needs a polynomial X+");
  const Poly2& f = z.plus.poly()[1];
  std::vector<Rational> gc;
  Poly2 th;
  for (const auto& [key, c] : f.terms()) {
    const auto [i, j] = key;
    if (j == 0) {
      if (static_cast<int>(gc.size()) <= i) gc.resize(i + 1, Rational(0));
      gc[i] = c;
    } else {
      th.add_term(i, j - 1, c);
    }
  }
  if (static_cast<int>(gc.size()) < 2 * k) fail(Errc::NotCanonical, "X2+(x, 0) lacks the x^(2k-1) term");
  for (int i = 0; i < 2 * k - 1; ++i)
    if (gc[i] != 0) fail(Errc::NotCanonical, "X2+(x, 0) has terms below x^(2k-1)");
  const double alpha = gc[2 * k - 1].get_d();
  if (!(alpha > 0)) fail(Errc::NotCanonical, "alpha must be positive");
  gc[2 * k - 1] = 0;
  BlowupParams p(k, theorem_n, alpha, phi);
  p.g = Poly1(gc);
  p.vartheta = th;
  return p;
}

double chart_c_x(const BlowupParams& p) {
  const double pb = p.phi.bracket_constant(p.n);
  return std::pow(2.0 / (pb * std::pow(p.alpha, p.n - 1)), 1.0 / (1.0 + 2.0 * p.k * (p.n - 1)));
}

double sigma_nk(const BlowupParams& p) {
  if (p.n > 2 * p.k - 1) return 0.0;
  const double th00 = p.vartheta.coeff(0, 0).get_d();
  return -th00 / (p.alpha * std::pow(chart_c_x(p), p.n));
}

Chart2Result chart2_crossing(const Chart2Config& cfg, const IntegratorConfig& ode) {
  const int k = cfg.k, n = cfg.theorem_n;
  if (k < 1 || n < std::max(2, 2 * k - 1)) fail(Errc::InvalidArgument, "need theorem n >= max(2, 2k-1)");
  Chart2Result res;
  res.v0 = cfg.v0;
  if (res.v0 < 0) {
    const double a = cfg.sigma - ipow(cfg.u0, 2 * k - 1);
    if (!(a > 0)) fail(Errc::InvalidArgument, "start abscissa is not left of the isocline root");
    res.v0 = std::pow(a, 1.0 / n);
  }
  if (!(res.v0 > 0)) fail(Errc::InvalidArgument, "v0 must be positive");
  using Ode = Dop853<2>;
  Ode solver([&](double, const Ode::State& s, Ode::State& d) {
               d = {1.0, -ipow(s[0], 2 * k - 1) - ipow(s[1], n) + cfg.sigma};
             },
             ode);
  double vmax = res.v0;
  auto obs = [&](const Ode& o, double, double tb) { vmax = std::max(vmax, o.dense(tb)[1]); };
  std::vector<Ode::Event> ev{{[](double, const Ode::State& s) { return s[1]; }, -1, true, 0}};
  auto r = solver.solve(0.0, {cfg.u0, res.v0}, 1e4, ev, obs);
  if (r.status != OdeStatus::Event) fail(Errc::NoCrossing, "chart-2 orbit did not reach v = 0");
  res.u_star = r.y[0];
  res.v_max = vmax;
  res.trapped = vmax <= res.v0 * (1.0 + 1e-12);
  res.above_root = res.u_star > odd_root(cfg.sigma, 2 * k - 1);
  return res;
}

EtaReport eta_from_chart(const BlowupParams& p, double u_big) {
  if (!(u_big > 0)) fail(Errc::InvalidArgument, "u_big must be positive");
  EtaReport e;
  e.c_x = chart_c_x(p);
  e.sigma = sigma_nk(p);
  Chart2Config c;
  c.k = p.k;
  c.theorem_n = p.n;
  c.sigma = e.sigma;
  c.u0 = -u_big;
  IntegratorConfig ode;
  ode.rtol = 1e-12;
  ode.atol = 1e-14;
  e.u_star = chart2_crossing(c, ode).u_star;
  c.u0 = -u_big / 2;
  e.u_star_check = chart2_crossing(c, ode).u_star;
  e.eta = e.c_x * e.u_star;
  return e;
}

Chart1System::Chart1System(const BlowupParams& p)
    : p_(p), ups_(upsilon_poly(p)), gt_(g_tilde(p)), pb_(p.phi.bracket_constant(p.n)) {}

std::array<double, 3> Chart1System::operator()(const std::array<double, 3>& s) const {
  const int k = p_.k, n = p_.n;
  const double x1 = s[0], r1 = s[1], e1 = s[2];
  const double r2k1 = ipow(r1, 2 * k - 1);
  const double H = ipow(x1, 2 * k - 1) * (p_.alpha + gt_.eval(ipow(r1, n) * x1)) +
                   0.5 * pb_ * (1.0 - r2k1 * ups_.eval(-r2k1));
  const double J = (ipow(r1, n) - ipow(r1, 1 - 2 * k + n)) * e1 *
                   p_.vartheta.eval(ipow(r1, n) * x1,
                                    -ipow(r1, 2 * k * (n - 1)) * (-r1 + ipow(r1, 2 * k)) * e1);
  const double G = (H - J) / (2 * k - 1);
  return {e1 + n * x1 * G, -r1 * G, (1.0 + 2.0 * k * (n - 1)) * e1 * G};
}

std::array<double, 3> chart1_rhs(const BlowupParams& p, const std::array<double, 3>& s) {
  return Chart1System(p)(s);
}

ChartConstants chart1_equilibrium(const BlowupParams& p) {
  ChartConstants c;
  const double pb = p.phi.bracket_constant(p.n);
  c.c_x = chart_c_x(p);
  c.c_y = -p.alpha * std::pow(c.c_x, 2 * p.k);
  c.x1_star = -std::pow(pb / (2.0 * p.alpha), 1.0 / (2 * p.k - 1));
  c.lambda1 = -pb * p.n / 2.0;
  const Chart1System sys(p);
  const std::array<double, 3> eq{c.x1_star, 0.0, 0.0};
  auto r = sys(eq);
  c.residual = std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
  Eigen::Matrix3d J;
  const double h = 1e-6;
  for (int j = 0; j < 3; ++j) {
    auto a = eq, b = eq;
    a[j] += h;
    b[j] -= h;
    auto fa = sys(a), fb = sys(b);
    for (int i = 0; i < 3; ++i) J(i, j) = (fa[i] - fb[i]) / (2 * h);
  }
  Eigen::EigenSolver<Eigen::Matrix3d> es(J, false);
  double best = 0.0;
  for (int i = 0; i < 3; ++i) {
    const auto ev = es.eigenvalues()(i);
    if (std::abs(ev) > std::abs(best)) best = ev.real();
  }
  c.lambda1_numeric = best;
  return c;
}

double chart1_invariant_drift(const BlowupParams& p, const std::array<double, 3>& s0,
                              double t_end, const IntegratorConfig& ode) {
  const double pw = 1.0 + 2.0 * p.k * (p.n - 1);
  auto Q = [pw](const std::array<double, 3>& s) { return s[2] * std::pow(s[1], pw); };
  const double q0 = Q(s0);
  if (q0 == 0.0) fail(Errc::InvalidArgument, "invariant vanishes at the start point");
  using Ode = Dop853<3>;
  const Chart1System sys(p);
  Ode solver([&sys](double, const Ode::State& s, Ode::State& d) { d = sys(s); }, ode);
  double drift = 0.0;
  auto obs = [&](const Ode& o, double, double tb) {
    if (tb <= 0.0) return;
    drift = std::max(drift, std::abs(Q(o.dense(tb)) - q0) / std::abs(q0) / tb);
  };
  auto r = solver.solve(0.0, s0, t_end, {}, obs);
  if (r.status != OdeStatus::Completed) fail(Errc::StepSizeUnderflow, "chart-1 orbit did not complete");
  return drift;
}

}  // namespace filreg
