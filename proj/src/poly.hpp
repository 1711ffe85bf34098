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

#pragma once

#include <gmpxx.h>

#include <array>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace filreg {

using Rational = mpq_class;

Rational rational_from_double(double v);

// Univariate polynomial with exact rational coefficients, c[i] multiplies s^i.
class Poly1 {
 public:
  Poly1() = default;
  explicit Poly1(std::vector<Rational> c);

  static Poly1 monomial(int power, const Rational& c);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<Rational>& coeffs() const { return c_; }
  Rational coeff(int i) const;

  Poly1 derivative() const;
  Poly1 antiderivative() const;  // zero constant term
  Poly1 operator+(const Poly1& o) const;
  Poly1 operator-(const Poly1& o) const;
  Poly1 operator*(const Poly1& o) const;
  Poly1 operator*(const Rational& a) const;

  Rational eval(const Rational& s) const;
  double eval(double s) const;
  // Coefficients of p(a + t) as a polynomial in t.
  Poly1 shifted(const Rational& a) const;

 private:
  void trim();
  std::vector<Rational> c_;
  std::vector<double> cd_;
};

// Bivariate polynomial sum c_ij x^i y^j with exact coefficients.  Double
// evaluation uses a compiled copy of the coefficients.
class Poly2 {
 public:
  using Key = std::pair<int, int>;

  Poly2() = default;
  static Poly2 constant(const Rational& c);
  static Poly2 x();
  static Poly2 y();
  static Poly2 monomial(int i, int j, const Rational& c);
  static Poly2 from_univariate_x(const Poly1& p);

  void add_term(int i, int j, const Rational& c);
  const std::map<Key, Rational>& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  Rational coeff(int i, int j) const;
  int max_deg_x() const { return mx_; }
  int max_deg_y() const { return my_; }

  Poly2 dx() const;
  Poly2 dy() const;
  Poly2 operator+(const Poly2& o) const;
  Poly2 operator-(const Poly2& o) const;
  Poly2 operator-() const;
  Poly2 operator*(const Poly2& o) const;
  Poly2 operator*(const Rational& a) const;
  Poly2 pow(int e) const;
  // p(a x + b, c y + d) composed with affine substitutions.
  Poly2 substitute_affine(const Rational& ax, const Rational& bx, const Rational& ay,
                          const Rational& by) const;
  bool operator==(const Poly2& o) const { return t_ == o.t_; }

  double eval(double x, double y) const;
  Rational eval(const Rational& x, const Rational& y) const;

  std::string to_string() const;

 private:
  void recompile();
  std::map<Key, Rational> t_;
  struct Term {
    int i, j;
    double c;
  };
  std::vector<Term> compiled_;
  int mx_ = 0, my_ = 0;
};

// Monomial-row text format.  Sections are opened by a "[name]" line and
// hold rows "<x-exp> <y-exp> <num> <den>"; '#' starts a comment.  A planar
// field uses sections "<prefix>.x1" and "<prefix>.x2".
std::map<std::string, Poly2> parse_poly_sections(const std::string& text);
std::string format_poly_sections(const std::map<std::string, Poly2>& sections);

}  // namespace filreg
