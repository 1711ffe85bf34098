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

#include <utility>
#include <vector>

namespace filreg {

struct LinearFit {
  double slope = 0.0, intercept = 0.0, r2 = 0.0;
};

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  double predicted = 0.0;
  double rel_dev = 0.0;  // |slope - predicted| / |predicted|
  std::vector<std::pair<double, double>> samples;  // (log eps, log q)
};

// OLS of log q on log eps.  Needs >= 6 points spanning >= 2 decades.
ScalingFit fit_scaling(const std::vector<std::pair<double, double>>& pairs, double predicted);

// Least squares y ~ sum_i c_i x^powers[i].
std::vector<double> power_fit(const std::vector<double>& x, const std::vector<double>& y,
                              const std::vector<int>& powers);

}  // namespace filreg
