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

#include <functional>
#include <vector>

#include "hybrid_flow.hpp"
#include "transition_maps.hpp"

namespace filreg {

using Polyline = std::vector<Vec2>;

// Symmetric Hausdorff distance with point-to-segment projection.
double hausdorff_distance(const Polyline& a, const Polyline& b);

// Closed polyline of H = 0 for the boundary-cycle family, no segment
// longer than max_segment.
Polyline boundary_cycle_polyline(int k, double max_segment = 1e-3);

// Period of the X+ orbit through (0, 2), measured from x = 0 back to x = 0.
double boundary_cycle_period(const FilippovSystem& z, const IntegratorConfig& ode = {});

struct ExteriorSample {
  double y_out = 0.0;
  double derivative = 0.0;  // dP/dy from the variational equation
  double t = 0.0;
};

// X+ orbit from (theta, y) around the outer loop to x = -rho.
ExteriorSample exterior_map(const FilippovSystem& z, double theta, double rho, double y,
                            const IntegratorConfig& ode = {}, double t_max = 200.0);

struct CycleConfig {
  CycleConfig(FilippovSystem z_, TransitionFunction phi_, int theorem_n_, double eps_)
      : z(std::move(z_)), phi(std::move(phi_)), theorem_n(theorem_n_), eps(eps_) {}

  FilippovSystem z;
  TransitionFunction phi;
  int theorem_n;
  double eps;
  double rho = 0.6;
  double theta = 0.6;
  double lambda = 0.27;
  int direction = +1;  // crossing direction of x = -rho that closes a revolution
  IntegratorConfig ode;
  double t_max = 200.0;

  TransitionConfig transition() const;
};

CycleConfig default_cycle_config(const FilippovSystem& z, const TransitionFunction& phi,
                                 int theorem_n, double eps);

// [eps, y^eps_{rho,lambda}] on x = -rho.
std::array<double, 2> cycle_window(const CycleConfig& cfg);

struct ReturnSample {
  double y_in = 0.0;
  double y_out = 0.0;
  double period = 0.0;
  double log_multiplier = 0.0;  // log of the variational multiplier
  HybridResult path;
};

// One revolution of Z_eps from (-rho, y) back to x = -rho.
ReturnSample return_map(const CycleConfig& cfg, double y, bool keep_samples = false);
// P^e composed with the upper transition map.
double return_map_composed(const CycleConfig& cfg, double y);

struct CycleResult {
  double fixed_point = 0.0;
  double period = 0.0;
  double multiplier = 0.0;          // variational in find_cycle, else the difference quotient
  double log_multiplier = 0.0;
  double multiplier_fd = 0.0;       // central difference
  double fd_resolution = 0.0;       // smallest slope the difference resolves
  bool fd_resolved = false;
  bool converged = false;
  int evaluations = 0;
  Polyline cycle;
};

// Fixed point of y -> pi(y) - y by bracketed root finding, falling back to
// iteration when the bracket has no sign change but pi contracts.
CycleResult find_fixed_point(const std::function<double(double)>& pi, double a, double b,
                             double tol = 1e-13, int max_iter = 100);
CycleResult find_cycle(const CycleConfig& cfg, double a, double b);

enum class GrazingSide { Upper, Lower };

// Value on the target section of the X+ orbit from (x, eps): forward to
// x = target for the upper half map, backward to x = target otherwise.
double grazing_half_return(const FilippovSystem& z, double eps, GrazingSide side, double x,
                           double target, const IntegratorConfig& ode = {});

struct GrazingFitConfig {
  GrazingSide side = GrazingSide::Upper;
  int k = 1;
  double psi = 0.0;
  // Exponent: log-log slope of T(psi + u) + T(psi - u) - 2 T(psi) for u in
  // [delta/4, delta]; the odd terms of the fold cancel in the sum.
  double exponent_target = 0.3;
  double exponent_delta = 1e-2;
  // kappa: one-sided polynomial fit of degree 2k + 1 on u in [delta/4, delta],
  // x = psi - u on the upper side and psi + u on the lower side.
  double kappa_target = 0.3;
  double kappa_delta = 1e-2;
  int points = 16;
};

struct GrazingFit {
  double exponent = 0.0;
  double exponent_r2 = 0.0;
  double kappa = 0.0;         // coefficient of (x - psi)^(2k)
  double extremum = 0.0;      // T(psi) on the kappa section
  double slope_at_psi = 0.0;  // linear coefficient of the kappa fit
};

GrazingFit grazing_fit(const FilippovSystem& z, double eps, const GrazingFitConfig& cfg,
                       const IntegratorConfig& ode = {});

}  // namespace filreg
