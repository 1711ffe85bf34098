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

#include "poly.hpp"

#include <algorithm>
#include <sstream>

#include "error.hpp"

namespace filreg {

Rational rational_from_double(double v) {
  // mpq_set_d is exact for finite doubles.
  Rational r;
  mpq_set_d(r.get_mpq_t(), v);
  return r;
}

// ---------------------------------------------------------------- Poly1

Poly1::Poly1(std::vector<Rational> c) : c_(std::move(c)) { trim(); }

Poly1 Poly1::monomial(int power, const Rational& c) {
  std::vector<Rational> v(power + 1, Rational(0));
  v[power] = c;
  return Poly1(std::move(v));
}

void Poly1::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
  cd_.resize(c_.size());
  for (size_t i = 0; i < c_.size(); ++i) cd_[i] = c_[i].get_d();
}

Rational Poly1::coeff(int i) const {
  if (i < 0 || i >= static_cast<int>(c_.size())) return Rational(0);
  return c_[i];
}

Poly1 Poly1::derivative() const {
  if (c_.size() <= 1) return Poly1();
  std::vector<Rational> d(c_.size() - 1);
  for (size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<long>(i);
  return Poly1(std::move(d));
}

Poly1 Poly1::antiderivative() const {
  std::vector<Rational> a(c_.size() + 1, Rational(0));
  for (size_t i = 0; i < c_.size(); ++i) {
    a[i + 1] = c_[i] / static_cast<long>(i + 1);
    a[i + 1].canonicalize();
  }
  return Poly1(std::move(a));
}

Poly1 Poly1::operator+(const Poly1& o) const {
  std::vector<Rational> r(std::max(c_.size(), o.c_.size()), Rational(0));
  for (size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
  for (size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
  return Poly1(std::move(r));
}

Poly1 Poly1::operator-(const Poly1& o) const { return *this + o * Rational(-1); }

Poly1 Poly1::operator*(const Poly1& o) const {
  if (c_.empty() || o.c_.empty()) return Poly1();
  std::vector<Rational> r(c_.size() + o.c_.size() - 1, Rational(0));
  for (size_t i = 0; i < c_.size(); ++i)
    for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
  return Poly1(std::move(r));
}

Poly1 Poly1::operator*(const Rational& a) const {
  std::vector<Rational> r(c_);
  for (auto& v : r) v *= a;
  return Poly1(std::move(r));
}

Rational Poly1::eval(const Rational& s) const {
  Rational acc(0);
  for (size_t i = c_.size(); i-- > 0;) acc = acc * s + c_[i];
  return acc;
}

double Poly1::eval(double s) const {
  double acc = 0.0;
  for (size_t i = cd_.size(); i-- > 0;) acc = acc * s + cd_[i];
  return acc;
}

Poly1 Poly1::shifted(const Rational& a) const {
  // Horner in polynomial arithmetic: p(a + t).
  Poly1 t(std::vector<Rational>{a, Rational(1)});
  Poly1 acc;
  for (size_t i = c_.size(); i-- > 0;) acc = acc * t + Poly1(std::vector<Rational>{c_[i]});
  return acc;
}

// ---------------------------------------------------------------- Poly2

Poly2 Poly2::constant(const Rational& c) { return monomial(0, 0, c); }
Poly2 Poly2::x() { return monomial(1, 0, Rational(1)); }
Poly2 Poly2::y() { return monomial(0, 1, Rational(1)); }

Poly2 Poly2::monomial(int i, int j, const Rational& c) {
  Poly2 p;
  p.add_term(i, j, c);
  return p;
}

Poly2 Poly2::from_univariate_x(const Poly1& q) {
  Poly2 p;
  for (int i = 0; i <= q.degree(); ++i) p.add_term(i, 0, q.coeff(i));
  return p;
}

void Poly2::add_term(int i, int j, const Rational& c) {
  if (i < 0 || j < 0) fail(Errc::InvalidArgument, "negative exponent in polynomial term");
  if (c == 0) return;
  auto it = t_.find({i, j});
  if (it == t_.end()) {
    t_.emplace(Key{i, j}, c);
  } else {
    it->second += c;
    if (it->second == 0) t_.erase(it);
  }
  recompile();
}

Rational Poly2::coeff(int i, int j) const {
  auto it = t_.find({i, j});
  return it == t_.end() ? Rational(0) : it->second;
}

void Poly2::recompile() {
  compiled_.clear();
  mx_ = my_ = 0;
  for (const auto& [k, c] : t_) {
    compiled_.push_back({k.first, k.second, c.get_d()});
    mx_ = std::max(mx_, k.first);
    my_ = std::max(my_, k.second);
  }
}

Poly2 Poly2::dx() const {
  Poly2 r;
  for (const auto& [k, c] : t_)
    if (k.first > 0) r.t_.emplace(Key{k.first - 1, k.second}, c * k.first);
  r.recompile();
  return r;
}

Poly2 Poly2::dy() const {
  Poly2 r;
  for (const auto& [k, c] : t_)
    if (k.second > 0) r.t_.emplace(Key{k.first, k.second - 1}, c * k.second);
  r.recompile();
  return r;
}

Poly2 Poly2::operator+(const Poly2& o) const {
  Poly2 r = *this;
  for (const auto& [k, c] : o.t_) {
    auto it = r.t_.find(k);
    if (it == r.t_.end()) {
      r.t_.emplace(k, c);
    } else {
      it->second += c;
      if (it->second == 0) r.t_.erase(it);
    }
  }
  r.recompile();
  return r;
}

Poly2 Poly2::operator-() const { return *this * Rational(-1); }
Poly2 Poly2::operator-(const Poly2& o) const { return *this + (-o); }

Poly2 Poly2::operator*(const Poly2& o) const {
  Poly2 r;
  for (const auto& [a, ca] : t_) {
    for (const auto& [b, cb] : o.t_) {
      Key k{a.first + b.first, a.second + b.second};
      auto it = r.t_.find(k);
      if (it == r.t_.end()) {
        r.t_.emplace(k, ca * cb);
      } else {
        it->second += ca * cb;
        if (it->second == 0) r.t_.erase(it);
      }
    }
  }
  r.recompile();
  return r;
}

Poly2 Poly2::operator*(const Rational& a) const {
  Poly2 r;
  if (a == 0) return r;
  for (const auto& [k, c] : t_) r.t_.emplace(k, c * a);
  r.recompile();
  return r;
}

Poly2 Poly2::pow(int e) const {
  if (e < 0) fail(Errc::InvalidArgument, "negative polynomial power");
  Poly2 r = constant(Rational(1));
  for (int i = 0; i < e; ++i) r = r * *this;
  return r;
}

Poly2 Poly2::substitute_affine(const Rational& ax, const Rational& bx, const Rational& ay,
                               const Rational& by) const {
  Poly2 X = x() * ax + constant(bx);
  Poly2 Y = y() * ay + constant(by);
  Poly2 r;
  for (const auto& [k, c] : t_) r = r + X.pow(k.first) * Y.pow(k.second) * c;
  return r;
}

double Poly2::eval(double x, double y) const {
  constexpr int kStack = 48;
  double xs[kStack], ys[kStack];
  std::vector<double> xv, yv;
  double* xp = xs;
  double* yp = ys;
  if (mx_ >= kStack || my_ >= kStack) {
    xv.resize(mx_ + 1);
    yv.resize(my_ + 1);
    xp = xv.data();
    yp = yv.data();
  }
  xp[0] = 1.0;
  for (int i = 1; i <= mx_; ++i) xp[i] = xp[i - 1] * x;
  yp[0] = 1.0;
  for (int j = 1; j <= my_; ++j) yp[j] = yp[j - 1] * y;
  double s = 0.0;
  for (const auto& t : compiled_) s += t.c * xp[t.i] * yp[t.j];
  return s;
}

Rational Poly2::eval(const Rational& x, const Rational& y) const {
  std::vector<Rational> xp(mx_ + 1), yp(my_ + 1);
  xp[0] = 1;
  for (int i = 1; i <= mx_; ++i) xp[i] = xp[i - 1] * x;
  yp[0] = 1;
  for (int j = 1; j <= my_; ++j) yp[j] = yp[j - 1] * y;
  Rational s(0);
  for (const auto& [k, c] : t_) s += c * xp[k.first] * yp[k.second];
  return s;
}

std::string Poly2::to_string() const {
  if (t_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : t_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.get_str() << ")";
    if (k.first) os << "*x^" << k.first;
    if (k.second) os << "*y^" << k.second;
  }
  return os.str();
}

// ---------------------------------------------------------------- text format

std::map<std::string, Poly2> parse_poly_sections(const std::string& text) {
  std::map<std::string, Poly2> out;
  std::istringstream in(text);
  std::string line, current;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    line = line.substr(b);
    if (line.front() == '[') {
      auto e = line.find(']');
      if (e == std::string::npos)
        fail(Errc::ParseError, "line " + std::to_string(lineno) + ": unterminated section");
      current = line.substr(1, e - 1);
      out[current];
      continue;
    }
    if (current.empty())
      fail(Errc::ParseError, "line " + std::to_string(lineno) + ": term outside a section");
    std::istringstream row(line);
    long i = -1, j = -1;
    std::string num, den;
    if (!(row >> i >> j >> num >> den))
      fail(Errc::ParseError, "line " + std::to_string(lineno) + ": expected 4 fields");
    Rational c;
    try {
      mpz_class n(num), d(den);
      if (d == 0) fail(Errc::ParseError, "line " + std::to_string(lineno) + ": zero denominator");
      c = Rational(n, d);
      c.canonicalize();
    } catch (const std::invalid_argument&) {
      fail(Errc::ParseError, "line " + std::to_string(lineno) + ": bad integer");
    }
    out[current].add_term(static_cast<int>(i), static_cast<int>(j), c);
  }
  return out;
}

std::string format_poly_sections(const std::map<std::string, Poly2>& sections) {
  std::ostringstream os;
  for (const auto& [name, p] : sections) {
    os << "[" << name << "]\n";
    for (const auto& [k, c] : p.terms())
      os << k.first << " " << k.second << " " << c.get_num().get_str() << " "
         << c.get_den().get_str() << "\n";
  }
  return os.str();
}

}  // namespace filreg
