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

// Directional charts of the blow-up of the canonical slow-fast system at
// the tangency: the entry chart (kappa_1) and the rescaling chart (kappa_2).

#pragma once

#include <array>

#include "dop853.hpp"
#include "field.hpp"
#include "transition_function.hpp"

namespace filreg {

struct BlowupParams {
  BlowupParams(int k_, int n_, double alpha_, TransitionFunction phi_)
      : k(k_), n(n_), alpha(alpha_), phi(std::move(phi_)) {}
  int k;
  int n;
  double alpha;
  TransitionFunction phi;
  Poly1 g;          // valuation >= 2k
  Poly2 vartheta;
};

// Reads alpha, g and vartheta off X2+ = alpha x^(2k-1) + g(x) + y vartheta(x, y).
BlowupParams blowup_params_from(const FilippovSystem& z, int k, int theorem_n,
                                const TransitionFunction& phi);

struct ChartConstants {
  double c_x = 0.0, c_y = 0.0;
  double x1_star = 0.0, lambda1 = 0.0;
  double residual = 0.0;        // |rhs| at (x1*, 0, 0)
  double lambda1_numeric = 0.0; // nonzero eigenvalue of the differenced Jacobian
};

double chart_c_x(const BlowupParams& p);
// s_{n,k}: zero for n > 2k-1, else -vartheta(0,0) / (alpha c_x^n).
double sigma_nk(const BlowupParams& p);

struct Chart2Config {
  int k = 1;
  int theorem_n = 2;
  double sigma = 0.0;
  double u0 = -20.0;
  double v0 = -1.0;  // < 0 picks the isocline value (sigma - u0^(2k-1))^(1/n)
};

struct Chart2Result {
  double u_star = 0.0;
  double v0 = 0.0;
  double v_max = 0.0;  // largest v seen before the crossing
  bool trapped = false;  // v stayed <= v0 along the path
  bool above_root = false;  // u* > sigma^(1/(2k-1)), real odd root
};

Chart2Result chart2_crossing(const Chart2Config& cfg, const IntegratorConfig& ode = {});

struct EtaReport {
  double eta = 0.0;
  double u_star = 0.0;
  double u_star_check = 0.0;  // u* from the start abscissa u0 / 2
  double c_x = 0.0;
  double sigma = 0.0;
};

EtaReport eta_from_chart(const BlowupParams& p, double u_big = 20.0);

// Chart-1 system in (x1, r1, eps1).
class Chart1System {
 public:
  explicit Chart1System(const BlowupParams& p);
  std::array<double, 3> operator()(const std::array<double, 3>& s) const;

 private:
  const BlowupParams& p_;
  Poly1 ups_, gt_;
  double pb_;
};

std::array<double, 3> chart1_rhs(const BlowupParams& p, const std::array<double, 3>& s);
ChartConstants chart1_equilibrium(const BlowupParams& p);

// Largest relative drift per unit time of eps1 r1^(1+2k(n-1)) along a chart-1
// orbit from s0 over [0, t_end].
double chart1_invariant_drift(const BlowupParams& p, const std::array<double, 3>& s0,
                              double t_end, const IntegratorConfig& ode = {});

}  // namespace filreg
