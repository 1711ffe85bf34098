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

#include <cmath>

#include "approx.hpp"
#include "doctest.h"
#include "error.hpp"
#include "fit.hpp"
#include "transition_maps.hpp"

using namespace filreg;

TEST_CASE("exact power law") {
  std::vector<std::pair<double, double>> q;
  for (double e : log_grid(1e-6, 1e-2, 9)) q.push_back({e, 3.0 * std::sqrt(e)});
  ScalingFit f = fit_scaling(q, 0.5);
  CHECK(f.slope == approx(0.5).epsilon(1e-12));
  CHECK(f.intercept == approx(std::log(3.0)).epsilon(1e-12));
  CHECK(f.r2 == approx(1.0).epsilon(1e-12));
  CHECK(f.rel_dev < 1e-12);
  CHECK(f.samples.size() == 9);
}

TEST_CASE("scaling fit preconditions") {
  std::vector<std::pair<double, double>> few{{1e-3, 1.0}, {1e-2, 2.0}};
  CHECK_THROWS_AS(fit_scaling(few, 1.0), Error);
  std::vector<std::pair<double, double>> narrow;
  for (int i = 0; i < 6; ++i) narrow.push_back({1e-3 * (1 + i), 1.0 + i});
  CHECK_THROWS_AS(fit_scaling(narrow, 1.0), Error);
  std::vector<std::pair<double, double>> neg;
  for (double e : log_grid(1e-6, 1e-2, 6)) neg.push_back({e, -e});
  try {
    fit_scaling(neg, 1.0);
    FAIL("expected NonPositiveQuantity");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NonPositiveQuantity);
  }
}

TEST_CASE("linear and polynomial least squares") {
  LinearFit l = linear_fit({0, 1, 2, 3}, {1, 3, 5, 7});
  CHECK(l.slope == approx(2.0));
  CHECK(l.intercept == approx(1.0));
  CHECK(l.r2 == approx(1.0));
  std::vector<double> x, y;
  for (int i = 0; i < 10; ++i) {
    const double t = 0.1 * i - 0.4;
    x.push_back(t);
    y.push_back(-t + 2.5 * t * t - 0.75 * std::pow(t, 4));
  }
  auto c = power_fit(x, y, {1, 2, 4});
  CHECK(c[0] == approx(-1.0).epsilon(1e-10));
  CHECK(c[1] == approx(2.5).epsilon(1e-10));
  CHECK(c[2] == approx(-0.75).epsilon(1e-10));
}

TEST_CASE("log grid") {
  auto g = log_grid(1e-6, 1e-2, 9);
  REQUIRE(g.size() == 9);
  CHECK(g.front() == 1e-6);
  CHECK(g.back() == approx(1e-2));
  CHECK(g[4] == approx(1e-4));
}
