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

#include "field.hpp"

namespace filreg {

// X+ = (1, alpha x^(2k-1) + g(x) + y vartheta(x, y)), X- = (0, 1), h = y.
FilippovSystem canonical_system(int k, double alpha, const Poly1& g = Poly1(),
                                const Poly2& vartheta = Poly2());

// Polynomial system with the boundary cycle H = 1 - x^(2k) - (y-1)^(2k) = 0,
// tangent to y = 0 at the origin.  Needs k > 1.
FilippovSystem boundary_cycle_example(int k = 2);

// Both fields negated.
FilippovSystem time_reversed(const FilippovSystem& z);

// Mirror image x -> -x of the boundary-cycle example followed by time
// reversal of X+.  Same cycle, same orientation and same visible contact at
// the origin, but the cycle repels.
FilippovSystem boundary_cycle_unstable(int k = 2);

// H(x, y) for the boundary-cycle family.
double boundary_cycle_H(int k, double x, double y);
Poly2 boundary_cycle_H_poly(int k);

// Scenario names accepted by the CLI and C API.
std::vector<std::string> scenario_names();
FilippovSystem scenario_by_name(const std::string& name, int k, double alpha, double vartheta);

}  // namespace filreg
