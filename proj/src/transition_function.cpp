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

#include "transition_function.hpp"

#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <sstream>

#include "error.hpp"

namespace filreg {

namespace {

mpz_class factorial(int n) {
  mpz_class f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Exact sign check of p on an equispaced grid of (-1, 1).
bool positive_on_open_interval(const Poly1& p, int samples) {
  for (int i = 1; i < samples; ++i) {
    Rational s(2 * i - samples, samples);
    if (p.eval(s) <= 0) return false;
  }
  return true;
}

}  // namespace

TransitionFunction::TransitionFunction(Poly1 phi, int n_class)
    : phi_(std::move(phi)), n_class_(n_class) {
  if (n_class_ < 1) fail(Errc::InvalidArgument, "transition function class must be >= 1");
  derivs_.push_back(phi_);
  for (int i = 1; i <= phi_.degree() + 1; ++i) derivs_.push_back(derivs_.back().derivative());
  for (const auto& d : derivs_) {
    derivs_top_.push_back(d.shifted(Rational(1)));
    derivs_bottom_.push_back(d.shifted(Rational(-1)));
  }
  top_ = phi_.shifted(Rational(1)) - Poly1(std::vector<Rational>{Rational(1)});
  bottom_ = phi_.shifted(Rational(-1)) + Poly1(std::vector<Rational>{Rational(1)});
}

double TransitionFunction::operator()(double s) const {
  if (s >= 1.0) return 1.0;
  if (s <= -1.0) return -1.0;
  return phi_.eval(s);
}

double TransitionFunction::derivative(double s, int order) const {
  if (order == 0) return (*this)(s);
  if (s >= 1.0 || s <= -1.0) return 0.0;
  if (order >= static_cast<int>(derivs_.size())) return 0.0;
  if (s > 0.5) return derivs_top_[order].eval(s - 1.0);
  if (s < -0.5) return derivs_bottom_[order].eval(s + 1.0);
  return derivs_[order].eval(s);
}

double TransitionFunction::derivative_below_top(double delta, int order) const {
  if (delta <= 0.0) return order == 0 ? 1.0 : 0.0;
  if (order >= static_cast<int>(derivs_.size())) return 0.0;
  return derivs_top_[order].eval(-delta);
}

double TransitionFunction::derivative_above_bottom(double delta, int order) const {
  if (delta <= 0.0) return order == 0 ? -1.0 : 0.0;
  if (order >= static_cast<int>(derivs_.size())) return 0.0;
  return derivs_bottom_[order].eval(delta);
}

Rational TransitionFunction::exact_derivative(const Rational& s, int order) const {
  if (order >= static_cast<int>(derivs_.size())) return Rational(0);
  return derivs_[order].eval(s);
}

double TransitionFunction::one_minus(double s) const {
  if (s >= 1.0) return 0.0;
  if (s <= -1.0) return 2.0;
  if (s >= 0.0) return -top_.eval(s - 1.0);
  return 2.0 - bottom_.eval(s + 1.0);
}

double TransitionFunction::one_plus(double s) const {
  if (s <= -1.0) return 0.0;
  if (s >= 1.0) return 2.0;
  if (s <= 0.0) return bottom_.eval(s + 1.0);
  return 2.0 + top_.eval(s - 1.0);
}

double TransitionFunction::inverse(double v) const {
  if (!(v > -1.0 && v < 1.0)) fail(Errc::OutOfRange, "phi_inverse needs |v| < 1");
  if (v == 0.0 && phi_.eval(0.0) == 0.0) return 0.0;
  if (v > 0.5) return 1.0 - inverse_complement(1.0 - v);
  if (v < -0.5) {
    // Mirror through the bottom expansion.
    auto f = [&](double d) { return bottom_.eval(d) - (1.0 + v); };
    boost::uintmax_t it = 200;
    auto r = boost::math::tools::toms748_solve(f, 0.0, 2.0, boost::math::tools::eps_tolerance<double>(52), it);
    return -1.0 + 0.5 * (r.first + r.second);
  }
  auto f = [&](double s) { return phi_.eval(s) - v; };
  boost::uintmax_t it = 200;
  auto r = boost::math::tools::toms748_solve(f, -1.0, 1.0, boost::math::tools::eps_tolerance<double>(52), it);
  double s = 0.5 * (r.first + r.second);
  // One Newton polish where the slope is healthy.
  double d = derivs_[1].eval(s);
  if (d > 1e-3) {
    double sn = s - (phi_.eval(s) - v) / d;
    if (std::abs(phi_.eval(sn) - v) < std::abs(phi_.eval(s) - v)) s = sn;
  }
  return s;
}

double TransitionFunction::inverse_complement(double w) const {
  if (!(w > 0.0 && w < 2.0)) fail(Errc::OutOfRange, "phi_inverse needs |v| < 1");
  // g(d) = 1 - phi(1 - d) = -top(-d), increasing in d.
  auto f = [&](double d) { return -top_.eval(-d) - w; };
  boost::uintmax_t it = 300;
  auto r = boost::math::tools::toms748_solve(f, 0.0, 2.0, -w, 2.0 - w,
                                             boost::math::tools::eps_tolerance<double>(52), it);
  return 0.5 * (r.first + r.second);
}

Rational TransitionFunction::bracket_constant_exact(int theorem_n) const {
  Rational dn = exact_derivative(Rational(1), theorem_n);
  if (dn == 0) fail(Errc::ClassMismatch, "phi^(n)(1) vanishes for the requested n");
  Rational r = dn / Rational(factorial(theorem_n));
  if ((theorem_n + 1) % 2 != 0) r = -r;
  return r;
}

double TransitionFunction::bracket_constant(int theorem_n) const {
  return bracket_constant_exact(theorem_n).get_d();
}

PhiInvariantReport TransitionFunction::check_invariants() const {
  PhiInvariantReport rep;
  std::ostringstream det;
  const Rational one(1), mone(-1);
  rep.endpoint_values = phi_.eval(one) == 1 && phi_.eval(mone) == -1;
  rep.vanishing_derivatives = true;
  for (int i = 1; i <= n_class_; ++i) {
    if (exact_derivative(one, i) != 0 || exact_derivative(mone, i) != 0) {
      rep.vanishing_derivatives = false;
      det << "phi^(" << i << ")(+-1) != 0; ";
    }
  }
  rep.nonvanishing_top =
      exact_derivative(one, n_class_ + 1) != 0 && exact_derivative(mone, n_class_ + 1) != 0;
  rep.odd = true;
  for (int i = 0; i <= phi_.degree(); i += 2)
    if (phi_.coeff(i) != 0) rep.odd = false;
  // phi' is a polynomial vanishing at +-1 only; positivity on a 4096-point
  // exact grid plus the sign of the leading behaviour near the endpoints.
  const Poly1& d1 = derivs_[1];
  rep.monotone = positive_on_open_interval(d1, 4096);
  if (rep.monotone) {
    // Near s = 1 the sign is that of the first nonzero Taylor term of phi'.
    Poly1 near = d1.shifted(one);
    for (int i = 0; i <= near.degree(); ++i) {
      if (near.coeff(i) != 0) {
        // phi'(1 + t) ~ c t^i with t < 0.
        int sign = near.coeff(i) > 0 ? 1 : -1;
        if (i % 2 == 1) sign = -sign;
        if (sign < 0) rep.monotone = false;
        break;
      }
    }
  }
  rep.detail = det.str();
  return rep;
}

TransitionFunction phi_family(int m) {
  if (m < 1) fail(Errc::InvalidArgument, "phi_family needs m >= 1");
  Poly1 base(std::vector<Rational>{Rational(-1), Rational(0), Rational(1)});  // s^2 - 1
  Poly1 p(std::vector<Rational>{Rational(1)});
  for (int i = 0; i < m; ++i) p = p * base;
  mpz_class fm = factorial(m);
  Rational c(factorial(2 * m + 1), mpz_class(1) << (2 * m));
  c /= Rational(fm * fm);
  c.canonicalize();
  if (m % 2 == 1) c = -c;
  return TransitionFunction(p.antiderivative() * c, m);
}

}  // namespace filreg
