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

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>

#include "poly.hpp"

namespace filreg {

using Vec2 = std::array<double, 2>;

struct Box {
  double xmin = -1e300, xmax = 1e300, ymin = -1e300, ymax = 1e300;
  bool contains(double x, double y) const {
    return x >= xmin && x <= xmax && y >= ymin && y <= ymax;
  }
};

// Smooth planar field.  Polynomial fields carry their exact form, which is
// also what eval uses.
class PlanarField {
 public:
  using Fn = std::function<Vec2(double, double)>;

  PlanarField() = default;
  PlanarField(Poly2 p1, Poly2 p2);
  explicit PlanarField(Fn fn);

  Vec2 operator()(double x, double y) const;
  double divergence(double x, double y) const;
  bool has_poly() const { return poly_.has_value(); }
  const std::array<Poly2, 2>& poly() const { return *poly_; }
  PlanarField negated() const;

  std::map<std::string, double> params;
  Box domain;

 private:
  std::optional<std::array<Poly2, 2>> poly_;
  std::optional<std::array<Poly2, 2>> dpoly_;  // (d/dx p1, d/dy p2)
  Fn fn_;
};

class SwitchingFunction {
 public:
  SwitchingFunction();  // h = y
  explicit SwitchingFunction(Poly2 h);

  double operator()(double x, double y) const { return h_.eval(x, y); }
  Vec2 grad(double x, double y) const { return {hx_.eval(x, y), hy_.eval(x, y)}; }
  const Poly2& poly() const { return h_; }
  bool is_y() const { return h_ == Poly2::y(); }

 private:
  Poly2 h_, hx_, hy_;
};

struct FilippovSystem {
  PlanarField plus;
  PlanarField minus;
  SwitchingFunction h;
  std::string name;
};

enum class Side { Plus, Minus };
enum class SigmaClass { Crossing, Sliding, Escaping, Tangency };
const char* sigma_class_name(SigmaClass c);

struct LieResult {
  double value = 0.0;
  bool precision_warning = false;  // finite differences above order 3
};

// X^order h at p, exact on polynomial data.
LieResult lie_derivative(const PlanarField& f, const SwitchingFunction& h, int order, double x,
                         double y);
// Exact symbolic X^order h as a polynomial.
Poly2 lie_derivative_poly(const PlanarField& f, const SwitchingFunction& h, int order);

struct ContactInfo {
  int multiplicity = 0;
  bool visible = false;
  bool visibility_defined = false;  // only for even multiplicity
};

double contact_tolerance(const PlanarField& f, double x, double y);
ContactInfo contact_classification(const PlanarField& f, const SwitchingFunction& h, double x,
                                   double y, int max_order, Side side = Side::Plus);

SigmaClass classify_sigma_point(const FilippovSystem& z, double x, double y,
                                double tol_section = 1e-9);
Vec2 sliding_field(const FilippovSystem& z, double x, double y);

}  // namespace filreg
