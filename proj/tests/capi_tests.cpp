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

// Exercises the shared library through its C header only.

#include <cmath>
#include <cstring>
#include <thread>
#include <vector>

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "approx.hpp"
#include "doctest.h"
#include "filreg/filreg.h"

namespace {

struct System {
  filreg_system* z = nullptr;
  ~System() { filreg_system_free(z); }
};
struct Phi {
  filreg_phi* p = nullptr;
  ~Phi() { filreg_phi_free(p); }
};

}  // namespace

TEST_CASE("version and error names") {
  CHECK(std::strlen(filreg_version()) > 0);
  CHECK(std::strcmp(filreg_error_name(FILREG_OK), "Ok") == 0);
  CHECK(std::strcmp(filreg_error_name(FILREG_E_NO_RETURN), "NoReturn") == 0);
  CHECK(std::strlen(filreg_error_name(999)) > 0);
}

TEST_CASE("null handles are rejected") {
  double v = 0.0;
  CHECK(filreg_phi_eval(nullptr, 0.0, 0, &v) == FILREG_E_INVALID_ARGUMENT);
  CHECK(std::strlen(filreg_last_error()) > 0);
  CHECK(filreg_scenario(nullptr, 1, 1.0, 0.0, nullptr) == FILREG_E_INVALID_ARGUMENT);
  filreg_phi_free(nullptr);
  filreg_system_free(nullptr);
}

TEST_CASE("phi through the C API") {
  Phi phi;
  REQUIRE(filreg_phi_family(1, &phi.p) == FILREG_OK);
  int deg = 0;
  CHECK(filreg_phi_degree(phi.p, &deg) == FILREG_OK);
  CHECK(deg == 3);
  char buf[64];
  CHECK(filreg_phi_coefficient(phi.p, 1, buf, sizeof buf) == FILREG_OK);
  CHECK(std::string(buf) == "3/2");
  CHECK(filreg_phi_coefficient(phi.p, 3, buf, sizeof buf) == FILREG_OK);
  CHECK(std::string(buf) == "-1/2");
  CHECK(filreg_phi_coefficient(phi.p, 1, buf, 2) == FILREG_E_OUT_OF_RANGE);
  double v = 0.0;
  CHECK(filreg_phi_eval(phi.p, 0.5, 0, &v) == FILREG_OK);
  CHECK(v == approx(0.6875));
  CHECK(filreg_phi_bracket_constant(phi.p, 2, &v) == FILREG_OK);
  CHECK(v == approx(1.5));
  filreg_phi_report r;
  CHECK(filreg_phi_check(phi.p, &r) == FILREG_OK);
  CHECK(r.endpoint_values);
  CHECK(r.vanishing_derivatives);
  CHECK(r.nonvanishing_top);
  CHECK(r.monotone);
  CHECK(r.n_class == 1);
  filreg_phi* bad = nullptr;
  CHECK(filreg_phi_family(0, &bad) == FILREG_E_INVALID_ARGUMENT);
  CHECK(bad == nullptr);
}

TEST_CASE("systems, contact and regions") {
  System z;
  REQUIRE(filreg_scenario("canonical", 1, 1.0, 0.0, &z.z) == FILREG_OK);
  char name[32];
  CHECK(filreg_system_name(z.z, name, sizeof name) == FILREG_OK);
  CHECK(std::string(name) == "canonical");
  int mult = 0, vis = 0;
  CHECK(filreg_contact(z.z, 0.0, 0.0, 8, &mult, &vis) == FILREG_OK);
  CHECK(mult == 2);
  CHECK(vis == 1);
  int region = -1;
  CHECK(filreg_classify(z.z, -0.5, 0.0, &region) == FILREG_OK);
  CHECK(region == FILREG_SLIDING);
  double s[2];
  CHECK(filreg_sliding_field(z.z, -0.5, 0.0, s) == FILREG_OK);
  CHECK(s[0] == approx(2.0 / 3.0));
  Phi phi;
  REQUIRE(filreg_phi_family(1, &phi.p) == FILREG_OK);
  CHECK(filreg_regularized_eval(z.z, phi.p, 2, 1e-3, 0.0, 0.0, s) == FILREG_OK);
  CHECK(s[0] == approx(0.5));
  CHECK(s[1] == approx(0.5));
  System bad;
  CHECK(filreg_scenario("nope", 1, 1.0, 0.0, &bad.z) == FILREG_E_INVALID_ARGUMENT);
}

TEST_CASE("system from text") {
  const char* text =
      "[plus.x1]\n0 0 1 1\n"
      "[plus.x2]\n1 0 1 1\n"
      "[minus.x1]\n"
      "[minus.x2]\n0 0 1 1\n";
  System z;
  REQUIRE(filreg_system_from_text(text, &z.z) == FILREG_OK);
  double v[2];
  CHECK(filreg_system_eval(z.z, +1, 0.25, 0.0, v) == FILREG_OK);
  CHECK(v[0] == 1.0);
  CHECK(v[1] == 0.25);
  CHECK(filreg_system_eval(z.z, -1, 0.25, 0.0, v) == FILREG_OK);
  CHECK(v[1] == 1.0);
  System bad;
  CHECK(filreg_system_from_text("[plus.x1]\n0 0 x 1\n", &bad.z) == FILREG_E_PARSE);
}

TEST_CASE("simulation") {
  System z;
  Phi phi;
  REQUIRE(filreg_scenario("canonical", 1, 1.0, 0.0, &z.z) == FILREG_OK);
  REQUIRE(filreg_phi_family(1, &phi.p) == FILREG_OK);
  filreg_params p = filreg_params_default(2, 1e-2);
  p.t_max = 2.0;
  filreg_trajectory* t = nullptr;
  REQUIRE(filreg_simulate(z.z, phi.p, &p, -0.3, 0.05, 0.0, &t) == FILREG_OK);
  CHECK(filreg_trajectory_size(t) > 2);
  REQUIRE(filreg_trajectory_event_count(t) >= 2);
  filreg_event e;
  CHECK(filreg_trajectory_event(t, 0, &e) == FILREG_OK);
  CHECK(e.id == -1);
  CHECK(e.y == approx(1e-2));
  CHECK(filreg_trajectory_event(t, 1, &e) == FILREG_OK);
  CHECK(e.id == -2);
  CHECK(filreg_trajectory_event(t, 99, &e) == FILREG_E_OUT_OF_RANGE);
  char status[32];
  CHECK(filreg_trajectory_status(t, status, sizeof status) == FILREG_OK);
  CHECK(std::string(status) == "time-limit");
  filreg_trajectory_free(t);
}

TEST_CASE("transition maps and scaling") {
  System z;
  Phi phi;
  REQUIRE(filreg_scenario("canonical", 1, 1.0, 0.0, &z.z) == FILREG_OK);
  REQUIRE(filreg_phi_family(1, &phi.p) == FILREG_OK);
  filreg_params p = filreg_params_default(2, 1e-3);
  CHECK(filreg_lambda_star(1, 2) == approx(2.0 / 3.0));
  double xe = 0.0, psi = -1.0;
  CHECK(filreg_x_epsilon(z.z, phi.p, &p, &xe) == FILREG_OK);
  CHECK(filreg_psi(z.z, phi.p, &p, &psi) == FILREG_OK);
  CHECK(xe > 0.0);
  CHECK(psi == 0.0);

  // rows come back in input order
  std::vector<double> eps{1e-2, 1e-6, 1e-4, 1e-3, 1e-5, 3e-3};
  std::vector<double> x(eps.size()), q(eps.size());
  REQUIRE(filreg_scaling_sweep(z.z, phi.p, &p, eps.data(), eps.size(), 3, x.data(), q.data()) == FILREG_OK);
  double x3 = 0.0;
  filreg_params p3 = filreg_params_default(2, 1e-3);
  CHECK(filreg_x_epsilon(z.z, phi.p, &p3, &x3) == FILREG_OK);
  CHECK(x[3] == x3);
  filreg_fit f;
  CHECK(filreg_fit_scaling(eps.data(), x.data(), eps.size(), 2.0 / 3.0, &f) == FILREG_OK);
  CHECK(f.rel_dev < 0.05);
  CHECK(filreg_fit_scaling(eps.data(), q.data(), eps.size(), 1.0, &f) == FILREG_E_NON_POSITIVE);

  double yr = 0.0;
  CHECK(filreg_y_rho_lambda(z.z, phi.p, &p, &yr) == FILREG_OK);
  filreg_map_sample a, b;
  CHECK(filreg_upper_map(z.z, phi.p, &p, p.eps, &a) == FILREG_OK);
  CHECK(filreg_upper_map(z.z, phi.p, &p, yr, &b) == FILREG_OK);
  CHECK(a.band_crossings == 2);
  CHECK(std::abs(a.output - b.output) < 1e-10);
  CHECK(b.log_derivative < -10.0);  // strong contraction through the band
  CHECK(filreg_lower_map(z.z, phi.p, &p, -0.2, &a) == FILREG_OK);
  CHECK(std::abs(a.output - b.output) < 1e-10);
  filreg_targets t;
  CHECK(filreg_predicted_targets(z.z, phi.p, &p, &t) == FILREG_OK);
  CHECK(t.y_theta == approx(b.output).epsilon(1e-8));
  CHECK(t.beta_hat < 0.0);
}

TEST_CASE("slow manifold and chart") {
  System z;
  Phi phi;
  REQUIRE(filreg_scenario("canonical", 1, 1.0, 0.0, &z.z) == FILREG_OK);
  REQUIRE(filreg_phi_family(1, &phi.p) == FILREG_OK);
  filreg_params p = filreg_params_default(2, 1e-4);
  p.L = 0.5;
  p.lambda = 0.5;
  const int n = 20;
  std::vector<double> x(n), m0(n), m1(n), pr(n), lo(n);
  double kmin = 0.0;
  int all = 0, upper = 0;
  REQUIRE(filreg_slow_manifold(z.z, phi.p, &p, 10.0, n, x.data(), m0.data(), m1.data(), pr.data(), lo.data(),
                               &kmin, &all, &upper) == FILREG_OK);
  CHECK(all == 1);
  CHECK(upper == 1);
  CHECK(kmin > 0.0);
  double lim = 0.0;
  CHECK(filreg_limit_coefficient(z.z, phi.p, &p, &lim) == FILREG_OK);
  CHECK(lim == approx(std::sqrt(4.0 / 3.0)));
  double a0 = 0.0, a1 = 0.0;
  CHECK(filreg_critical_manifold(z.z, phi.p, &p, -1.0 / 3.0, &a0, &a1) == FILREG_OK);
  CHECK(a0 == approx(0.3472963553338607));

  filreg_chart_report c;
  REQUIRE(filreg_chart(z.z, phi.p, 1, 2, &c) == FILREG_OK);
  CHECK(c.x1_star == approx(-0.75));
  CHECK(c.lambda1 == approx(-1.5));
  CHECK(c.c_x == approx(std::cbrt(4.0 / 3.0)));
  CHECK(c.eta > 0.0);
}

TEST_CASE("boundary cycle") {
  System z;
  Phi phi;
  REQUIRE(filreg_scenario("boundary-cycle", 2, 1.0, 0.0, &z.z) == FILREG_OK);
  REQUIRE(filreg_phi_family(5, &phi.p) == FILREG_OK);
  double T = 0.0;
  CHECK(filreg_boundary_cycle_period(z.z, &T) == FILREG_OK);
  CHECK(T == approx(7.4162987).epsilon(1e-6));
  filreg_params p = filreg_params_default(6, 0.01);
  p.rho = p.theta = 0.6;
  p.lambda = 0.27;
  p.rtol = 1e-12;
  p.atol = 1e-14;
  p.t_max = 200.0;
  filreg_cycle_result r;
  filreg_polyline* cyc = nullptr;
  REQUIRE(filreg_find_cycle(z.z, phi.p, &p, +1, &r, &cyc) == FILREG_OK);
  CHECK(r.converged);
  CHECK(r.multiplier < 1.0);
  CHECK(r.fixed_point > r.window_lo);
  CHECK(r.fixed_point < r.window_hi);
  double out = 0.0, per = 0.0;
  CHECK(filreg_return_map(z.z, phi.p, &p, +1, r.fixed_point, &out, &per) == FILREG_OK);
  CHECK(std::abs(out - r.fixed_point) < 1e-10);
  filreg_polyline* gamma = nullptr;
  REQUIRE(filreg_boundary_cycle_curve(2, 1e-3, &gamma) == FILREG_OK);
  double dh = 0.0;
  CHECK(filreg_hausdorff(cyc, gamma, &dh) == FILREG_OK);
  CHECK(dh > 0.0);
  CHECK(dh < 0.02);
  double pt[2];
  CHECK(filreg_polyline_point(gamma, 0, pt) == FILREG_OK);
  CHECK(filreg_polyline_point(gamma, filreg_polyline_size(gamma), pt) == FILREG_E_OUT_OF_RANGE);
  filreg_polyline_free(cyc);
  filreg_polyline_free(gamma);

  const double xs[] = {0.0, 1.0}, ys[] = {0.0, 0.0};
  filreg_polyline* a = nullptr;
  REQUIRE(filreg_polyline_create(xs, ys, 2, &a) == FILREG_OK);
  CHECK(filreg_hausdorff(a, a, &dh) == FILREG_OK);
  CHECK(dh == 0.0);
  filreg_polyline_free(a);
}

TEST_CASE("errors are per thread") {
  Phi phi;
  REQUIRE(filreg_phi_family(1, &phi.p) == FILREG_OK);
  double v = 0.0;
  CHECK(filreg_phi_eval(phi.p, 0.0, -1, &v) != FILREG_OK);
  const std::string mine = filreg_last_error();
  std::string other = "unset";
  std::thread th([&] {
    filreg_phi* p = nullptr;
    filreg_phi_family(2, &p);
    other = filreg_last_error();
    filreg_phi_free(p);
  });
  th.join();
  CHECK(other.empty());
  CHECK(std::string(filreg_last_error()) == mine);
}

TEST_CASE("linear fit") {
  const double x[] = {0, 1, 2, 3}, y[] = {1, 3, 5, 7};
  filreg_fit f;
  CHECK(filreg_linear_fit(x, y, 4, &f) == FILREG_OK);
  CHECK(f.slope == approx(2.0));
  CHECK(f.intercept == approx(1.0));
}
