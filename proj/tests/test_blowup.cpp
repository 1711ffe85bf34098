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

#include "blowup.hpp"
#include "approx.hpp"
#include "doctest.h"
#include "error.hpp"
#include "scenarios.hpp"

using namespace filreg;

TEST_CASE("chart-1 equilibrium, k = 1, n = 2") {
  BlowupParams p(1, 2, 1.0, phi_family(1));
  ChartConstants c = chart1_equilibrium(p);
  CHECK(c.x1_star == approx(-0.75).epsilon(1e-12));
  CHECK(c.lambda1 == approx(-1.5).epsilon(1e-12));
  CHECK(std::abs(c.residual) < 1e-12);
  CHECK(c.lambda1_numeric == approx(-1.5).epsilon(1e-6));
}

TEST_CASE("chart-1 equilibrium, k = 2, n = 3") {
  BlowupParams p(2, 3, 1.0, phi_family(2));
  ChartConstants c = chart1_equilibrium(p);
  CHECK(c.x1_star == approx(-std::cbrt(1.25)).epsilon(1e-12));
  CHECK(c.lambda1 == approx(-3.75).epsilon(1e-12));
  CHECK(std::abs(c.residual) < 1e-12);
  CHECK(c.lambda1_numeric == approx(-3.75).epsilon(1e-6));
}

TEST_CASE("chart constant c_x") {
  BlowupParams p(1, 2, 1.0, phi_family(1));
  CHECK(chart_c_x(p) == approx(std::cbrt(4.0 / 3.0)).epsilon(1e-12));
}

TEST_CASE("sigma vanishes without vartheta") {
  for (int k : {1, 2}) {
    const int n = k == 1 ? 2 : 3;
    BlowupParams p = blowup_params_from(canonical_system(k, 1.0), k, n, phi_family(n - 1));
    CHECK(sigma_nk(p) == 0.0);
    EtaReport e = eta_from_chart(p);
    CHECK(e.eta > 0.0);
    CHECK(e.u_star > 0.0);
  }
}

TEST_CASE("chart-2 crossing") {
  Chart2Config c;
  c.k = 1;
  c.theorem_n = 2;
  c.u0 = -10.0;
  Chart2Result r = chart2_crossing(c);
  CHECK(r.v0 == approx(std::sqrt(10.0)));
  CHECK(r.u_star > 0.0);
  CHECK(r.above_root);
  CHECK(r.trapped);
  // regression baseline
  CHECK(r.u_star == approx(1.01879).epsilon(1e-5));
  c.u0 = -20.0;
  CHECK(std::abs(chart2_crossing(c).u_star - r.u_star) < 1e-6);

  c.sigma = 1.0;
  c.u0 = -10.0;
  CHECK(chart2_crossing(c).u_star > 1.0);
}

TEST_CASE("u* is nondecreasing in sigma") {
  for (int k : {1, 2}) {
    Chart2Config c;
    c.k = k;
    c.theorem_n = k == 1 ? 2 : 3;
    c.u0 = -10.0;
    double prev = -1e300;
    for (double s : {-0.5, 0.0, 0.5, 1.0}) {
      c.sigma = s;
      const double u = chart2_crossing(c).u_star;
      CHECK(u >= prev);
      prev = u;
    }
  }
}

TEST_CASE("chart-1 conserved quantity") {
  BlowupParams p(1, 2, 1.0, phi_family(1));
  IntegratorConfig ode;
  ode.rtol = 1e-12;
  ode.atol = 1e-14;
  CHECK(chart1_invariant_drift(p, {-0.5, 0.2, 0.1}, 1.0, ode) < 1e-9);
  CHECK_THROWS_AS(chart1_invariant_drift(p, {-0.5, 0.0, 0.1}, 1.0, ode), Error);
}

TEST_CASE("chart-2 rejects an orbit starting right of the isocline root") {
  Chart2Config c;
  c.u0 = 1.0;
  CHECK_THROWS_AS(chart2_crossing(c), Error);
}
