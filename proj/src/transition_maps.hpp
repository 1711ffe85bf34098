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

#include <vector>

#include "hybrid_flow.hpp"
#include "regularize.hpp"

namespace filreg {

struct TransitionConfig {
  TransitionConfig(FilippovSystem z_, TransitionFunction phi_, int theorem_n_, double eps_)
      : z(std::move(z_)), phi(std::move(phi_)), theorem_n(theorem_n_), eps(eps_) {}

  FilippovSystem z;
  TransitionFunction phi;
  int theorem_n;
  double eps;
  double rho = 0.3;
  double theta = 0.3;
  double lambda = 0.0;  // 0 picks lambda*/2
  double yhat0 = 0.9;
  double L = 0.0;       // 0 picks default_window_L
  IntegratorConfig ode;
  double t_max = 1e3;

  TransitionConfig with_eps(double e) const {
    TransitionConfig c = *this;
    c.eps = e;
    return c;
  }
};

double lambda_star(int k, int theorem_n);

RegularizedField make_regularized(const TransitionConfig& cfg);
// lambda, or lambda*/2 when unset.
double effective_lambda(const TransitionConfig& cfg);
double effective_L(const TransitionConfig& cfg);

// Abscissa where the attracting slow manifold leaves the band through yhat = 1.
double find_x_epsilon(const TransitionConfig& cfg);
// Root of X2+(x, eps) = 0 near the origin.
double tangency_curve_psi(const TransitionConfig& cfg);

struct MapSample {
  double input = 0.0;
  double output = 0.0;
  int band_crossings = 0;  // crossings of y = eps, start point included
  double x_exit = 0.0;     // x where the orbit leaves through y = eps
  double x_level = 0.0;    // lower map: x where yhat first reaches yhat0
  double t = 0.0;
  double log_jac = 0.0;
  double log_derivative = 0.0;  // log |d output / d input|
};

// (-rho, y) -> {x = theta}.
MapSample upper_transition_map(const TransitionConfig& cfg, double y);
// (x, -eps) -> {x = theta}.
MapSample lower_transition_map(const TransitionConfig& cfg, double x);

// y-coordinate at x of the X+ orbit through the origin.
double ybar(const TransitionConfig& cfg, double x);
// Backward X+ orbit from (-eps^lambda, eps) evaluated on x = -rho.
double y_rho_lambda(const TransitionConfig& cfg);

struct PredictedTargets {
  double y_theta = 0.0;
  double y_rho_lambda = 0.0;
  double ybar_theta = 0.0;
  double ybar_minus_rho = 0.0;
  double beta_hat = 0.0;
  double x_eps = 0.0;
  double y_rho_lambda_measured = 0.0;
};

PredictedTargets predicted_targets(const TransitionConfig& cfg);

// First return of the orbit from (x, eps) to y = eps.
double mirror_map(const TransitionConfig& cfg, double x);

struct ScalingRow {
  double eps, x_eps, psi;
};

// x_eps and psi over an eps grid, computed by `workers` threads and sorted by eps.
std::vector<ScalingRow> scaling_sweep(const TransitionConfig& cfg, const std::vector<double>& eps,
                                      int workers = 1);

std::vector<double> log_grid(double lo, double hi, int points);

}  // namespace filreg
