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

#include "regularize.hpp"

#include <cmath>

#include "error.hpp"

namespace filreg {

namespace {

double factorial_d(int n) {
  double f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

int infer_k(const FilippovSystem& z) {
  auto it = z.plus.params.find("k");
  if (it != z.plus.params.end()) return static_cast<int>(it->second);
  if (!z.plus.has_poly()) return 1;
  try {
    ContactInfo c = contact_classification(z.plus, z.h, 0.0, 0.0, 12);
    return std::max(1, c.multiplicity / 2);
  } catch (const Error&) {
    return 1;
  }
}

}  // namespace

RegularizedField::RegularizedField(FilippovSystem base, TransitionFunction phi, double eps,
                                   int theorem_n)
    : base_(std::move(base)), phi_(std::move(phi)), eps_(eps), n_(theorem_n) {
  if (!(eps_ > 0)) fail(Errc::InvalidArgument, "eps must be positive");
  if (n_ < 1) fail(Errc::InvalidArgument, "theorem n must be >= 1");
  k_ = infer_k(base_);
  if (base_.plus.has_poly()) {
    fx_ = base_.plus.poly()[1].dx();
    fy_ = base_.plus.poly()[1].dy();
    have_fpoly_ = true;
  }
}

RegularizedField regularized_field(const FilippovSystem& z, const TransitionFunction& phi,
                                   double eps, int theorem_n) {
  return RegularizedField(z, phi, eps, theorem_n);
}

Vec2 RegularizedField::operator()(double x, double y) const {
  const double hv = base_.h(x, y);
  if (hv >= eps_) return base_.plus(x, y);
  if (hv <= -eps_) return base_.minus(x, y);
  const double s = hv / eps_;
  const double wp = 0.5 * phi_.one_plus(s), wm = 0.5 * phi_.one_minus(s);
  Vec2 p = base_.plus(x, y), m = base_.minus(x, y);
  return {wp * p[0] + wm * m[0], wp * p[1] + wm * m[1]};
}

double RegularizedField::divergence(double x, double y) const {
  if (!base_.h.is_y()) fail(Errc::NotCanonical, "band divergence needs h = y");
  if (y >= eps_) return base_.plus.divergence(x, y);
  if (y <= -eps_) return base_.minus.divergence(x, y);
  return band_log_jacobian_rate(x, y / eps_) / eps_;
}

Vec2 RegularizedField::band_rhs(double x, double yhat) const {
  const double y = eps_ * yhat;
  const double wp = 0.5 * phi_.one_plus(yhat), wm = 0.5 * phi_.one_minus(yhat);
  Vec2 p = base_.plus(x, y), m = base_.minus(x, y);
  return {eps_ * (wp * p[0] + wm * m[0]), wp * p[1] + wm * m[1]};
}

double RegularizedField::band_log_jacobian_rate(double x, double yhat) const {
  const double y = eps_ * yhat;
  const double wp = 0.5 * phi_.one_plus(yhat), wm = 0.5 * phi_.one_minus(yhat);
  const double dphi = phi_.derivative(yhat, 1);
  Vec2 p = base_.plus(x, y), m = base_.minus(x, y);
  return eps_ * (wp * base_.plus.divergence(x, y) + wm * base_.minus.divergence(x, y)) +
         0.5 * dphi * (p[1] - m[1]);
}

double RegularizedField::f_x(double x, double y) const {
  if (have_fpoly_) return fx_.eval(x, y);
  const double h = 1e-5 * (1.0 + std::abs(x));
  return (-f(x + 2 * h, y) + 8 * f(x + h, y) - 8 * f(x - h, y) + f(x - 2 * h, y)) / (12 * h);
}

double RegularizedField::f_y(double x, double y) const {
  if (have_fpoly_) return fy_.eval(x, y);
  const double h = 1e-5 * (1.0 + std::abs(y));
  return (-f(x, y + 2 * h) + 8 * f(x, y + h) - 8 * f(x, y - h) + f(x, y - 2 * h)) / (12 * h);
}

double leading_alpha(const RegularizedField& rf) {
  auto it = rf.base().plus.params.find("alpha");
  if (it != rf.base().plus.params.end()) return it->second;
  const int k = rf.k();
  return lie_derivative(rf.base().plus, rf.base().h, 2 * k, 0.0, 0.0).value / factorial_d(2 * k - 1);
}

bool is_canonical_window(const FilippovSystem& z) {
  if (!z.h.is_y()) return false;
  if (z.minus.has_poly()) {
    const auto& m = z.minus.poly();
    return m[0].is_zero() && m[1] == Poly2::constant(Rational(1));
  }
  // Sampled check on the unit square.
  for (int i = -4; i <= 4; ++i)
    for (int j = -4; j <= 4; ++j) {
      Vec2 v = z.minus(0.25 * i, 0.25 * j);
      if (v[0] != 0.0 || v[1] != 1.0) return false;
    }
  return true;
}

FastSystem::FastSystem(const RegularizedField& rf) : rf_(&rf) {
  if (!is_canonical_window(rf.base())) fail(Errc::NotCanonical, "fast system needs X- = (0,1) and h = y");
}

// ---------------------------------------------------------------- critical manifold

CriticalManifold::CriticalManifold(const RegularizedField& rf, double L) : rf_(&rf), L_(L) {
  if (!(L > 0)) fail(Errc::InvalidArgument, "L must be positive");
  for (int i = 1; i <= 1000; ++i) {
    const double x = -L * i / 1000.0;
    if (rf.f(x, 0.0) >= 0.0)
      fail(Errc::ConditionViolated, "X2+(x,0) >= 0 at x = " + std::to_string(x));
  }
  alpha_ = leading_alpha(rf);
}

double CriticalManifold::m0_complement(double x) const {
  const double f = rf_->f(x, 0.0);
  if (f >= 0.0) fail(Errc::ConditionViolated, "critical manifold needs X2+(x,0) < 0");
  // phi(m0) = (1 + f)/(1 - f), so 1 - phi(m0) = -2f/(1 - f).
  const double w = -2.0 * f / (1.0 - f);
  if (w < 1.0) return rf_->phi().inverse_complement(w);
  return 1.0 - rf_->phi().inverse((1.0 + f) / (1.0 - f));
}

double CriticalManifold::m0(double x) const {
  const double f = rf_->f(x, 0.0);
  if (f >= 0.0) fail(Errc::ConditionViolated, "critical manifold needs X2+(x,0) < 0");
  const double v = (1.0 + f) / (1.0 - f);
  if (v > 0.5) return 1.0 - m0_complement(x);
  return rf_->phi().inverse(v);
}

double CriticalManifold::m0_prime(double x) const {
  const double f = rf_->f(x, 0.0);
  const double d = m0_complement(x);
  const double dphi = d < 0.5 ? rf_->phi().derivative_below_top(d, 1) : rf_->phi().derivative(1.0 - d, 1);
  return 2.0 * rf_->f_x(x, 0.0) / ((1.0 - f) * (1.0 - f) * dphi);
}

double CriticalManifold::m1(double x) const {
  // From invariance of yhat = m0 + eps m1 under the fast system at first
  // order in eps: m1 = -m0' (a m0' - f_y m0) / f_x with a = X1+(x, 0).
  const double fx = rf_->f_x(x, 0.0);
  if (std::abs(fx) < 1e-12) fail(Errc::DegenerateDenominator, "f_x vanishes in m1");
  const double mp = m0_prime(x);
  const double a = rf_->base().plus(x, 0.0)[0];
  return -mp * (a * mp - rf_->f_y(x, 0.0) * m0(x)) / fx;
}

double CriticalManifold::limit_coefficient() const {
  const int n = rf_->theorem_n();
  const double dn = std::abs(rf_->phi().exact_derivative(Rational(1), n).get_d());
  if (dn == 0.0) fail(Errc::ClassMismatch, "phi^(n)(1) vanishes");
  return std::pow(2.0 * alpha_ * factorial_d(n) / dn, 1.0 / n);
}

double default_window_L(const RegularizedField& rf) {
  for (int i = 1; i <= 1000; ++i) {
    const double x = -0.5 * i / 1000.0;
    if (rf.f(x, 0.0) >= 0.0) {
      if (i == 1) fail(Errc::ConditionViolated, "no sliding window left of the origin");
      return 0.5 * (i - 1) / 1000.0;
    }
  }
  return 0.5;
}

// ---------------------------------------------------------------- sandwich

SandwichReport slow_manifold_sandwich_check(const RegularizedField& rf, double L, double lambda,
                                            double K, int points, const IntegratorConfig& cfg) {
  FastSystem fs(rf);
  CriticalManifold cm(rf, L);
  const double eps = rf.eps();
  const int k = rf.k(), n = rf.theorem_n();
  const double transient = 5.0 * eps * std::abs(std::log(eps));
  const double xa = -L + transient, xb = -std::pow(eps, lambda);
  if (points < 2) fail(Errc::InvalidArgument, "sandwich grid needs >= 2 points");
  if (xa >= xb) fail(Errc::TransientNotDecayed, "transient does not decay before -eps^lambda");

  SandwichReport rep;
  rep.K = K;
  rep.exponent = (2.0 * k * (n - 2) + 2.0) / n;

  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i) grid[i] = xa + (xb - xa) * i / (points - 1);

  using Ode = Dop853<2>;
  Ode ode([&](double, const Ode::State& s, Ode::State& d) {
            Vec2 v = fs(s[0], s[1]);
            d[0] = v[0];
            d[1] = v[1];
          },
          cfg);
  std::vector<Ode::Event> events;
  for (int i = 0; i < points; ++i)
    events.push_back({[xi = grid[i]](double, const Ode::State& s) { return s[0] - xi; }, +1, i == points - 1, i});
  Ode::State y0{-L, cm.m0(-L) + eps * cm.m1(-L)};
  auto res = ode.solve(0.0, y0, cfg.max_time / eps, events);
  std::vector<double> proxy(points, std::nan(""));
  for (const auto& h : res.hits)
    if (!h.graze && h.id >= 0 && h.id < points) proxy[h.id] = h.y[1];
  if (std::isnan(proxy.back())) fail(Errc::NoExit, "fast trajectory did not reach -eps^lambda");

  rep.all_hold = true;
  rep.upper_all_hold = true;
  for (int i = 0; i < points; ++i) {
    const double x = grid[i];
    SandwichRow r;
    r.x = x;
    r.m0 = cm.m0(x);
    r.m1 = cm.m1(x);
    r.m_proxy = proxy[i];
    const double scale = eps / std::pow(std::abs(x), rep.exponent);
    r.lower_bound = r.m0 - K * scale;
    r.lower_ok = r.m_proxy >= r.lower_bound;
    r.upper_ok = r.m_proxy <= r.m0;
    rep.K_min = std::max(rep.K_min, (r.m0 - r.m_proxy) / scale);
    rep.all_hold = rep.all_hold && r.lower_ok && r.upper_ok;
    rep.upper_all_hold = rep.upper_all_hold && r.upper_ok;
    rep.rows.push_back(r);
  }
  return rep;
}

}  // namespace filreg
