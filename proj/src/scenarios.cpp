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

#include "scenarios.hpp"

#include <cmath>

#include "error.hpp"

namespace filreg {

namespace {

PlanarField unit_vertical() {
  PlanarField m(Poly2(), Poly2::constant(Rational(1)));
  return m;
}

}  // namespace

FilippovSystem canonical_system(int k, double alpha, const Poly1& g, const Poly2& vartheta) {
  if (k < 1) fail(Errc::InvalidArgument, "k must be a positive integer");
  if (!(alpha > 0)) fail(Errc::InvalidArgument, "alpha must be positive");
  for (int i = 0; i < std::min(2 * k, g.degree() + 1); ++i)
    if (g.coeff(i) != 0) fail(Errc::BadValuation, "g must have valuation >= 2k");
  const Rational a = rational_from_double(alpha);
  Poly2 x2 = Poly2::monomial(2 * k - 1, 0, a) + Poly2::from_univariate_x(g) + Poly2::y() * vartheta;
  FilippovSystem z;
  z.plus = PlanarField(Poly2::constant(Rational(1)), x2);
  z.plus.params = {{"k", k}, {"alpha", alpha}, {"vartheta00", vartheta.coeff(0, 0).get_d()}};
  z.plus.domain = {-2.0, 2.0, -2.0, 2.0};
  z.minus = unit_vertical();
  z.minus.domain = z.plus.domain;
  z.name = "canonical";
  return z;
}

Poly2 boundary_cycle_H_poly(int k) {
  const Poly2 x = Poly2::x(), ym1 = Poly2::y() - Poly2::constant(Rational(1));
  return Poly2::constant(Rational(1)) - x.pow(2 * k) - ym1.pow(2 * k);
}

double boundary_cycle_H(int k, double x, double y) {
  return 1.0 - std::pow(x, 2 * k) - std::pow(y - 1.0, 2 * k);
}

FilippovSystem boundary_cycle_example(int k) {
  if (k < 2) fail(Errc::InvalidArgument, "the boundary-cycle example needs k > 1");
  const Poly2 one = Poly2::constant(Rational(1));
  const Poly2 x = Poly2::x(), y = Poly2::y();
  const Poly2 ym1 = y - one;
  Poly2 x1 = -(x * (x.pow(2 * k) - one)) + ym1.pow(2 * k - 1) * (x - one - x * y);
  Poly2 x2 = x.pow(2 * k - 1) - (x.pow(2 * k) - one + ym1.pow(2 * k)) * ym1;
  FilippovSystem z;
  z.plus = PlanarField(x1, x2);
  z.plus.params = {{"k", k}};
  z.plus.domain = {-2.0, 2.0, -1.5, 3.0};
  z.minus = unit_vertical();
  z.minus.domain = z.plus.domain;
  z.name = "boundary-cycle";
  return z;
}

FilippovSystem time_reversed(const FilippovSystem& z) {
  FilippovSystem r;
  r.plus = z.plus.negated();
  r.minus = z.minus.negated();
  r.h = z.h;
  r.name = z.name + "-reversed";
  return r;
}

FilippovSystem boundary_cycle_unstable(int k) {
  FilippovSystem base = boundary_cycle_example(k);
  const auto& p = base.plus.poly();
  const Rational m1(-1), z0(0), p1(1);
  Poly2 y1 = p[0].substitute_affine(m1, z0, p1, z0);
  Poly2 y2 = -p[1].substitute_affine(m1, z0, p1, z0);
  FilippovSystem z;
  z.plus = PlanarField(y1, y2);
  z.plus.params = base.plus.params;
  z.plus.domain = base.plus.domain;
  z.minus = base.minus;
  z.name = "boundary-cycle-unstable";
  return z;
}

std::vector<std::string> scenario_names() {
  return {"canonical", "boundary-cycle", "boundary-cycle-reversed", "boundary-cycle-unstable"};
}

FilippovSystem scenario_by_name(const std::string& name, int k, double alpha, double vartheta) {
  if (name == "canonical") {
    Poly2 th;
    if (vartheta != 0.0) th = Poly2::constant(rational_from_double(vartheta));
    return canonical_system(k, alpha, Poly1(), th);
  }
  if (name == "boundary-cycle") return boundary_cycle_example(k);
  if (name == "boundary-cycle-reversed") return time_reversed(boundary_cycle_example(k));
  if (name == "boundary-cycle-unstable") return boundary_cycle_unstable(k);
  fail(Errc::InvalidArgument, "unknown scenario: " + name);
}

}  // namespace filreg
