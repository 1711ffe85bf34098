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

// Flow of Z_eps for h = y.  Outside the band the raw fields are integrated;
// inside |y| < eps the fast form in (x, yhat) is used, so the band is never
// stiff.  A third state carries the integral of div Z_eps along the orbit.

#pragma once

#include <array>
#include <vector>

#include "dop853.hpp"
#include "regularize.hpp"

namespace filreg {

enum class Mode { Plus, Band, Minus };

enum class SectionKind { Vertical, Horizontal };

struct Section {
  SectionKind kind = SectionKind::Vertical;
  double c = 0.0;
  int direction = 0;  // +1 increasing along the run, -1 decreasing, 0 both
  bool terminal = true;
  int id = 0;  // must be >= 0
};

// Ids of the band boundary crossings reported among the hits.
constexpr int kTopEntry = -1;     // y = eps crossed downward
constexpr int kTopExit = -2;      // y = eps crossed upward
constexpr int kBottomExit = -3;   // y = -eps crossed downward
constexpr int kBottomEntry = -4;  // y = -eps crossed upward

// Bits for HybridConfig::terminal_boundaries.
constexpr unsigned kStopTopEntry = 1u, kStopTopExit = 2u, kStopBottomExit = 4u,
                   kStopBottomEntry = 8u;

struct HybridConfig {
  IntegratorConfig ode;
  double t_max = 1e3;       // physical time budget
  double time_sign = 1.0;   // -1 integrates backward
  Box window;               // leaving it stops with LeftWindow
  double sample_spacing = -1.0;  // > 0 dense samples, 0 step ends, < 0 none
  int max_switches = 100000;
  unsigned terminal_boundaries = 0;
};

enum class HybridStatus { Section, Boundary, TimeLimit, LeftWindow, MaxSwitches, StepUnderflow,
                          NonFinite };

struct HybridHit {
  double t, x, y, log_jac;
  int id;
  int direction;
  bool graze;
};

struct HybridResult {
  HybridStatus status = HybridStatus::TimeLimit;
  double t = 0, x = 0, y = 0, log_jac = 0;
  Mode mode = Mode::Plus;
  int stop_id = 0;
  std::vector<HybridHit> hits;
  std::vector<std::array<double, 3>> samples;  // (t, x, y)
  int top_entries = 0, top_exits = 0, bottom_entries = 0, bottom_exits = 0;
  long steps = 0;
};

const char* hybrid_status_name(HybridStatus s);

Mode start_mode(const RegularizedField& rf, double x, double y, double time_sign);

HybridResult hybrid_flow(const RegularizedField& rf, double x0, double y0,
                         const std::vector<Section>& sections, const HybridConfig& cfg);

// Flow of a single smooth field with the log-Jacobian integral.
HybridResult smooth_flow(const PlanarField& f, double x0, double y0,
                         const std::vector<Section>& sections, const HybridConfig& cfg);

}  // namespace filreg
