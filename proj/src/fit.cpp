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

#include "fit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "error.hpp"

namespace filreg {

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) fail(Errc::InvalidArgument, "linear fit needs >= 2 paired points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) fail(Errc::InvalidArgument, "linear fit with constant abscissa");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy == 0.0 ? 1.0 : sxy * sxy / (sxx * syy);
  return f;
}

ScalingFit fit_scaling(const std::vector<std::pair<double, double>>& pairs, double predicted) {
  if (pairs.size() < 6) fail(Errc::InvalidArgument, "scaling fit needs >= 6 points");
  double lo = pairs[0].first, hi = pairs[0].first;
  ScalingFit s;
  std::vector<double> lx, ly;
  for (const auto& [e, q] : pairs) {
    if (!(e > 0)) fail(Errc::InvalidArgument, "eps must be positive");
    if (!(q > 0)) fail(Errc::NonPositiveQuantity, "scaling quantity must be positive");
    lo = std::min(lo, e);
    hi = std::max(hi, e);
    lx.push_back(std::log(e));
    ly.push_back(std::log(q));
    s.samples.push_back({lx.back(), ly.back()});
  }
  if (hi / lo < 100.0 * (1 - 1e-12)) fail(Errc::InvalidArgument, "eps values must span >= 2 decades");
  LinearFit f = linear_fit(lx, ly);
  s.slope = f.slope;
  s.intercept = f.intercept;
  s.r2 = f.r2;
  s.predicted = predicted;
  s.rel_dev = predicted != 0.0 ? std::abs(f.slope - predicted) / std::abs(predicted)
                               : std::abs(f.slope);
  return s;
}

std::vector<double> power_fit(const std::vector<double>& x, const std::vector<double>& y,
                              const std::vector<int>& powers) {
  const std::size_t n = x.size(), m = powers.size();
  if (y.size() != n || n < m || m == 0) fail(Errc::InvalidArgument, "power fit needs >= terms points");
  Eigen::MatrixXd A(n, m);
  Eigen::VectorXd b(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) A(i, j) = std::pow(x[i], powers[j]);
    b(i) = y[i];
  }
  // Column scaling keeps the normal matrix well conditioned for tiny x.
  Eigen::VectorXd scale(m);
  for (std::size_t j = 0; j < m; ++j) {
    scale(j) = A.col(j).norm();
    if (scale(j) == 0.0) scale(j) = 1.0;
    A.col(j) /= scale(j);
  }
  Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);
  std::vector<double> out(m);
  for (std::size_t j = 0; j < m; ++j) out[j] = c(j) / scale(j);
  return out;
}

}  // namespace filreg
