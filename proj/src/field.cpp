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

#include "field.hpp"

#include <cmath>

#include "error.hpp"

namespace filreg {

PlanarField::PlanarField(Poly2 p1, Poly2 p2) {
  poly_ = std::array<Poly2, 2>{std::move(p1), std::move(p2)};
  dpoly_ = std::array<Poly2, 2>{(*poly_)[0].dx(), (*poly_)[1].dy()};
}

PlanarField::PlanarField(Fn fn) : fn_(std::move(fn)) {}

Vec2 PlanarField::operator()(double x, double y) const {
  if (poly_) return {(*poly_)[0].eval(x, y), (*poly_)[1].eval(x, y)};
  return fn_(x, y);
}

double PlanarField::divergence(double x, double y) const {
  if (dpoly_) return (*dpoly_)[0].eval(x, y) + (*dpoly_)[1].eval(x, y);
  const double hx = 1e-6 * (1.0 + std::abs(x)), hy = 1e-6 * (1.0 + std::abs(y));
  return (fn_(x + hx, y)[0] - fn_(x - hx, y)[0]) / (2 * hx) +
         (fn_(x, y + hy)[1] - fn_(x, y - hy)[1]) / (2 * hy);
}

PlanarField PlanarField::negated() const {
  PlanarField r;
  if (poly_) {
    r = PlanarField(-(*poly_)[0], -(*poly_)[1]);
  } else {
    Fn f = fn_;
    r = PlanarField([f](double x, double y) {
      Vec2 v = f(x, y);
      return Vec2{-v[0], -v[1]};
    });
  }
  r.params = params;
  r.domain = domain;
  return r;
}

SwitchingFunction::SwitchingFunction() : SwitchingFunction(Poly2::y()) {}

SwitchingFunction::SwitchingFunction(Poly2 h) : h_(std::move(h)), hx_(h_.dx()), hy_(h_.dy()) {}

const char* sigma_class_name(SigmaClass c) {
  switch (c) {
    case SigmaClass::Crossing: return "crossing";
    case SigmaClass::Sliding: return "sliding";
    case SigmaClass::Escaping: return "escaping";
    case SigmaClass::Tangency: return "tangency";
  }
  return "?";
}

Poly2 lie_derivative_poly(const PlanarField& f, const SwitchingFunction& h, int order) {
  if (!f.has_poly()) fail(Errc::InvalidArgument, "symbolic Lie derivative needs a polynomial field");
  if (order < 1) fail(Errc::InvalidArgument, "Lie derivative order must be >= 1");
  const auto& X = f.poly();
  Poly2 g = h.poly();
  for (int i = 0; i < order; ++i) g = g.dx() * X[0] + g.dy() * X[1];
  return g;
}

namespace {

// Nested central differences for X^order h, order <= 3 is the intended use.
double lie_fd(const PlanarField& f, const SwitchingFunction& h, int order, double x, double y,
              double step) {
  if (order == 0) return h(x, y);
  auto lower = [&](double a, double b) { return lie_fd(f, h, order - 1, a, b, step); };
  Vec2 v = f(x, y);
  double gx = (lower(x + step, y) - lower(x - step, y)) / (2 * step);
  double gy = (lower(x, y + step) - lower(x, y - step)) / (2 * step);
  return gx * v[0] + gy * v[1];
}

}  // namespace

LieResult lie_derivative(const PlanarField& f, const SwitchingFunction& h, int order, double x,
                         double y) {
  if (order < 1) fail(Errc::InvalidArgument, "Lie derivative order must be >= 1");
  if (!f.domain.contains(x, y)) fail(Errc::DomainError, "point outside field domain");
  LieResult r;
  if (f.has_poly()) {
    Poly2 g = lie_derivative_poly(f, h, order);
    r.value = g.eval(rational_from_double(x), rational_from_double(y)).get_d();
    return r;
  }
  // Richardson on step halving removes the O(step^2) term.
  const double s = std::pow(1e-16, 1.0 / (2.0 + order)) * (1.0 + std::hypot(x, y));
  double a = lie_fd(f, h, order, x, y, s);
  double b = lie_fd(f, h, order, x, y, s / 2);
  r.value = (4 * b - a) / 3;
  r.precision_warning = order > 3;
  return r;
}

double contact_tolerance(const PlanarField& f, double x, double y) {
  Vec2 v = f(x, y);
  return 1e-9 * (1.0 + std::hypot(v[0], v[1]));
}

ContactInfo contact_classification(const PlanarField& f, const SwitchingFunction& h, double x,
                                   double y, int max_order, Side side) {
  if (max_order < 2) fail(Errc::InvalidArgument, "max_order must be >= 2");
  const double tol = contact_tolerance(f, x, y);
  ContactInfo c;
  for (int i = 1; i <= max_order; ++i) {
    double v = lie_derivative(f, h, i, x, y).value;
    if (std::abs(v) > tol) {
      c.multiplicity = i;
      if (i % 2 == 0) {
        c.visibility_defined = true;
        c.visible = side == Side::Plus ? v > 0 : v < 0;
      }
      return c;
    }
  }
  fail(Errc::UnresolvedContact, "all Lie derivatives up to max_order vanish");
}

SigmaClass classify_sigma_point(const FilippovSystem& z, double x, double y, double tol_section) {
  if (std::abs(z.h(x, y)) >= tol_section)
    fail(Errc::InvalidArgument, "point is not on the switching manifold");
  double a = lie_derivative(z.plus, z.h, 1, x, y).value;
  double b = lie_derivative(z.minus, z.h, 1, x, y).value;
  if (std::abs(a) <= contact_tolerance(z.plus, x, y) ||
      std::abs(b) <= contact_tolerance(z.minus, x, y))
    return SigmaClass::Tangency;
  if (a * b > 0) return SigmaClass::Crossing;
  return a < 0 ? SigmaClass::Sliding : SigmaClass::Escaping;
}

Vec2 sliding_field(const FilippovSystem& z, double x, double y) {
  double a = lie_derivative(z.plus, z.h, 1, x, y).value;
  double b = lie_derivative(z.minus, z.h, 1, x, y).value;
  double den = b - a;
  if (std::abs(den) < 1e-14) fail(Errc::DegenerateDenominator, "X-h - X+h vanishes");
  Vec2 p = z.plus(x, y), m = z.minus(x, y);
  return {(b * p[0] - a * m[0]) / den, (b * p[1] - a * m[1]) / den};
}

}  // namespace filreg
