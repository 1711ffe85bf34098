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

#include "dop853.hpp"
#include "field.hpp"
#include "transition_function.hpp"

namespace filreg {

// Z_eps = (1 + Phi(h/eps))/2 X+ + (1 - Phi(h/eps))/2 X-.
class RegularizedField {
 public:
  RegularizedField(FilippovSystem base, TransitionFunction phi, double eps, int theorem_n);

  const FilippovSystem& base() const { return base_; }
  const TransitionFunction& phi() const { return phi_; }
  double eps() const { return eps_; }
  int theorem_n() const { return n_; }
  int k() const { return k_; }

  Vec2 operator()(double x, double y) const;
  // Divergence of Z_eps; the band formula needs h = y.
  double divergence(double x, double y) const;

  // Band dynamics in (x, yhat = y/eps) and fast time t/eps.  Valid for any
  // X- as long as h = y.
  Vec2 band_rhs(double x, double yhat) const;
  // eps * div Z_eps at (x, eps*yhat): the fast-time rate of log |Jacobian|.
  double band_log_jacobian_rate(double x, double yhat) const;

  // X2+(x, y) and its partial derivatives, for the critical manifold.
  double f(double x, double y) const { return base_.plus(x, y)[1]; }
  double f_x(double x, double y) const;
  double f_y(double x, double y) const;

 private:
  FilippovSystem base_;
  TransitionFunction phi_;
  double eps_;
  int n_;
  int k_ = 1;
  Poly2 fx_, fy_;
  bool have_fpoly_ = false;
};

RegularizedField regularized_field(const FilippovSystem& z, const TransitionFunction& phi,
                                   double eps, int theorem_n);

// alpha in X2+(x, 0) ~ alpha x^(2k-1): the "alpha" parameter when set,
// else (X+)^(2k) h(0,0) / (2k-1)!.
double leading_alpha(const RegularizedField& rf);

// True when X- = (0, 1) and h = y.
bool is_canonical_window(const FilippovSystem& z);

// Band dynamics as a plain planar field; needs X- = (0, 1) and h = y.
class FastSystem {
 public:
  explicit FastSystem(const RegularizedField& rf);
  Vec2 operator()(double x, double yhat) const { return rf_->band_rhs(x, yhat); }
  const RegularizedField& field() const { return *rf_; }

 private:
  const RegularizedField* rf_;
};

class CriticalManifold {
 public:
  CriticalManifold(const RegularizedField& rf, double L);

  double L() const { return L_; }
  double m0(double x) const;
  // 1 - m0(x), accurate as x -> 0-.
  double m0_complement(double x) const;
  double m0_prime(double x) const;
  double m1(double x) const;
  // (2 alpha n! / |phi^(n)(1)|)^(1/n) with alpha read off X2+(x,0) ~ alpha x^(2k-1).
  double limit_coefficient() const;
  double alpha() const { return alpha_; }

 private:
  const RegularizedField* rf_;
  double L_;
  double alpha_;
};

// Largest L <= 0.5 such that X2+(x, 0) < 0 on a 1000-point grid of [-L, 0).
double default_window_L(const RegularizedField& rf);

struct SandwichRow {
  double x, m0, m1, m_proxy, lower_bound;
  bool lower_ok, upper_ok;
};

struct SandwichReport {
  std::vector<SandwichRow> rows;
  double K = 0.0;
  double K_min = 0.0;  // smallest K for which every lower bound holds
  double exponent = 0.0;
  bool all_hold = false;
  bool upper_all_hold = false;
};

SandwichReport slow_manifold_sandwich_check(const RegularizedField& rf, double L, double lambda,
                                            double K, int points = 50,
                                            const IntegratorConfig& cfg = {});

}  // namespace filreg
