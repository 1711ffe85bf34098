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

#include <string>
#include <vector>

#include "poly.hpp"

namespace filreg {

struct PhiInvariantReport {
  bool endpoint_values = false;      // phi(+-1) = +-1
  bool vanishing_derivatives = false;  // phi^(i)(+-1) = 0, i = 1..n_class
  bool nonvanishing_top = false;     // phi^(n_class+1)(+-1) != 0
  bool odd = false;
  bool monotone = false;             // phi' > 0 on (-1, 1)
  bool all() const {
    return endpoint_values && vanishing_derivatives && nonvanishing_top && monotone;
  }
  std::string detail;
};

// Monotone polynomial transition profile on [-1, 1], extended by sign
// outside.  n_class is the largest order whose derivatives vanish at +-1.
class TransitionFunction {
 public:
  TransitionFunction(Poly1 phi, int n_class);

  const Poly1& poly() const { return phi_; }
  int n_class() const { return n_class_; }

  // Extended profile: sign(s) for |s| >= 1.
  double operator()(double s) const;
  // order-th derivative of the extension (0 outside [-1,1] for order >= 1).
  double derivative(double s, int order) const;
  Rational exact_derivative(const Rational& s, int order) const;
  // phi^(order)(1 - delta) and phi^(order)(-1 + delta) from the endpoint
  // expansions, accurate when delta is tiny.
  double derivative_below_top(double delta, int order) const;
  double derivative_above_bottom(double delta, int order) const;

  // 1 - Phi(s) and 1 + Phi(s) evaluated without cancellation near +-1.
  double one_minus(double s) const;
  double one_plus(double s) const;

  // s in (-1,1) with phi(s) = v.
  double inverse(double v) const;
  // delta in (0, 2) with 1 - phi(1 - delta) = w, accurate for tiny w.
  double inverse_complement(double w) const;

  // phi^[n] = (-1)^(n+1) phi^(n)(1) / n!
  double bracket_constant(int theorem_n) const;
  Rational bracket_constant_exact(int theorem_n) const;

  PhiInvariantReport check_invariants() const;

 private:
  Poly1 phi_;
  int n_class_;
  std::vector<Poly1> derivs_;
  std::vector<Poly1> derivs_top_, derivs_bottom_;  // derivatives shifted to +1 and -1
  Poly1 top_;     // phi(1 + t) - 1
  Poly1 bottom_;  // phi(-1 + t) + 1
};

// phi_m(s) = (-1)^m (2m+1)! / (2^(2m) (m!)^2) * int_0^s (u^2 - 1)^m du, class C^m.
TransitionFunction phi_family(int m);

}  // namespace filreg
