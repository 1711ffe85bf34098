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

// filreg-cli: experiment runner over the filreg C API.

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <memory>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "cli_config.hpp"
#include "filreg/filreg.h"

namespace {

using namespace filreg_cli;

struct ApiError {
  int code;
  std::string message;
};

void check(int rc) {
  if (rc != FILREG_OK) throw ApiError{rc, filreg_last_error()};
}

using SystemPtr = std::unique_ptr<filreg_system, decltype(&filreg_system_free)>;
using PhiPtr = std::unique_ptr<filreg_phi, decltype(&filreg_phi_free)>;
using PolyPtr = std::unique_ptr<filreg_polyline, decltype(&filreg_polyline_free)>;

SystemPtr make_system(const Options& o) {
  filreg_system* z = nullptr;
  check(filreg_scenario(o.scenario.c_str(), o.k, o.alpha, o.vartheta, &z));
  return SystemPtr(z, filreg_system_free);
}

PhiPtr make_phi(int m) {
  filreg_phi* p = nullptr;
  check(filreg_phi_family(m, &p));
  return PhiPtr(p, filreg_phi_free);
}

filreg_params params_of(const Options& o, double eps) {
  filreg_params p = filreg_params_default(o.n, eps);
  p.rho = o.rho;
  p.theta = o.theta;
  p.lambda = o.lambda;
  p.yhat0 = o.yhat0;
  p.L = o.L;
  p.rtol = o.rtol;
  p.atol = o.atol;
  p.t_max = o.t_max;
  return p;
}

Json config_json(const Options& o) {
  Json c = Json::object();
  for (const auto& [k, v] : config_pairs(o)) {
    char* end = nullptr;
    const double d = std::strtod(v.c_str(), &end);
    if (!v.empty() && *end == '\0' && k != "out") c[k] = d;
    else c[k] = v;
  }
  return c;
}

Json fit_json(const filreg_fit& f, bool with_prediction) {
  Json j{{"slope", f.slope}, {"intercept", f.intercept}, {"r2", f.r2}};
  if (with_prediction) {
    j["predicted"] = f.predicted;
    j["rel_dev"] = f.rel_dev;
  }
  return j;
}

// Runs task(i) for i < count on o.workers threads; the first failure wins.
void parallel_for(size_t count, int workers, const std::function<void(size_t)>& task) {
  std::atomic<size_t> next{0};
  std::mutex mu;
  std::exception_ptr err;
  auto work = [&] {
    for (size_t i = next++; i < count; i = next++) {
      try {
        task(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!err) err = std::current_exception();
      }
    }
  };
  const int n = std::max(1, std::min<int>(workers, static_cast<int>(count)));
  std::vector<std::thread> pool;
  for (int i = 1; i < n; ++i) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

// ---------------------------------------------------------------- subcommands

Json run_phi(const Options& o) {
  PhiPtr phi = make_phi(o.phi_m);
  int deg = 0;
  check(filreg_phi_degree(phi.get(), &deg));
  std::ostringstream csv;
  csv << header_block(o) << "power,coefficient,value\n";
  Json coeffs = Json::array();
  char buf[256];
  for (int i = 1; i <= deg; ++i) {
    check(filreg_phi_coefficient(phi.get(), i, buf, sizeof buf));
    const std::string c = buf;
    const auto slash = c.find('/');
    const double v = slash == std::string::npos ? std::stod(c) : std::stod(c.substr(0, slash)) / std::stod(c.substr(slash + 1));
    csv << i << "," << c << "," << num(v) << "\n";
    coeffs.push_back(c);
  }
  write_file(o.out, "phi.csv", csv.str());
  filreg_phi_report r;
  check(filreg_phi_check(phi.get(), &r));
  double bracket = 0.0;
  check(filreg_phi_bracket_constant(phi.get(), o.n, &bracket));
  return Json{{"m", o.phi_m},
              {"degree", deg},
              {"class", r.n_class},
              {"coefficients", coeffs},
              {"invariants",
               {{"endpoint_values", bool(r.endpoint_values)},
                {"vanishing_derivatives", bool(r.vanishing_derivatives)},
                {"nonvanishing_top", bool(r.nonvanishing_top)},
                {"odd", bool(r.odd)},
                {"monotone", bool(r.monotone)}}},
              {"bracket_constant", bracket}};
}

Json run_simulate(const Options& o) {
  SystemPtr z = make_system(o);
  PhiPtr phi = make_phi(o.phi_m);
  filreg_params p = params_of(o, o.eps);
  filreg_trajectory* raw = nullptr;
  check(filreg_simulate(z.get(), phi.get(), &p, o.x0, o.y0, o.spacing, &raw));
  std::unique_ptr<filreg_trajectory, decltype(&filreg_trajectory_free)> t(raw, filreg_trajectory_free);

  struct Row {
    double t, x, y;
    int event;
    bool is_event;
  };
  std::vector<Row> rows;
  const size_t ns = filreg_trajectory_size(t.get()), ne = filreg_trajectory_event_count(t.get());
  for (size_t i = 0; i < ns; ++i) {
    double s[3];
    check(filreg_trajectory_sample(t.get(), i, s));
    rows.push_back({s[0], s[1], s[2], 0, false});
  }
  Json events = Json::array();
  for (size_t i = 0; i < ne; ++i) {
    filreg_event e;
    check(filreg_trajectory_event(t.get(), i, &e));
    rows.push_back({e.t, e.x, e.y, e.id, true});
    events.push_back({{"t", e.t}, {"x", e.x}, {"y", e.y}, {"id", e.id}, {"direction", e.direction},
                      {"graze", bool(e.graze)}});
  }
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.t < b.t; });
  std::ostringstream csv;
  csv << header_block(o) << "t,x,y,event\n";
  for (const auto& r : rows)
    csv << num(r.t) << "," << num(r.x) << "," << num(r.y) << "," << (r.is_event ? std::to_string(r.event) : "") << "\n";
  write_file(o.out, "trajectory.csv", csv.str());
  char status[64];
  check(filreg_trajectory_status(t.get(), status, sizeof status));
  const Row last = ns ? rows.back() : Row{0, o.x0, o.y0, 0, false};
  return Json{{"status", status}, {"samples", ns}, {"t_final", last.t}, {"x_final", last.x},
              {"y_final", last.y}, {"events", events}};
}

Json run_scaling(const Options& o) {
  SystemPtr z = make_system(o);
  PhiPtr phi = make_phi(o.phi_m);
  std::vector<double> eps = eps_grid(o);
  std::vector<double> xe(eps.size()), psi(eps.size());
  filreg_params p = params_of(o, eps.front());
  check(filreg_scaling_sweep(z.get(), phi.get(), &p, eps.data(), eps.size(), o.workers, xe.data(), psi.data()));

  std::ostringstream csv;
  csv << header_block(o) << "eps,x_eps,psi_eps\n";
  bool psi_below = true;
  for (size_t i = 0; i < eps.size(); ++i) {
    csv << num(eps[i]) << "," << num(xe[i]) << "," << num(psi[i]) << "\n";
    psi_below = psi_below && xe[i] > psi[i];
  }
  write_file(o.out, "scaling.csv", csv.str());

  const double lam_star = filreg_lambda_star(o.k, o.n);
  Json j{{"lambda_star", lam_star}, {"x_eps_greater_than_psi", psi_below}};
  filreg_fit f;
  if (eps.size() >= 2) {
    check(filreg_fit_scaling(eps.data(), xe.data(), eps.size(), lam_star, &f));
    Json xf = fit_json(f, true);
    xf["eta_hat"] = std::exp(f.intercept);
    j["x_eps_fit"] = xf;
    if (filreg_fit_scaling(eps.data(), psi.data(), eps.size(), 1.0 / (2 * o.k - 1), &f) == FILREG_OK)
      j["psi_fit"] = fit_json(f, true);
    else
      j["psi_fit"] = Json{{"skipped", filreg_last_error()}};
  }
  return j;
}

Json run_map(const Options& o, bool upper) {
  SystemPtr z = make_system(o);
  PhiPtr phi = make_phi(o.phi_m);
  std::vector<double> eps = eps_grid(o);
  if (o.samples < 2) throw std::invalid_argument("--samples must be >= 2");
  struct PerEps {
    double lo = 0, hi = 0;
    std::vector<filreg_map_sample> s;
    filreg_targets targets{};
  };
  std::vector<PerEps> res(eps.size());
  parallel_for(eps.size(), o.workers, [&](size_t i) {
    filreg_params p = params_of(o, eps[i]);
    PerEps& r = res[i];
    if (upper) {
      r.lo = eps[i];
      check(filreg_y_rho_lambda(z.get(), phi.get(), &p, &r.hi));
    } else {
      r.lo = -o.rho;
      r.hi = -std::pow(eps[i], o.lambda);
    }
    for (int j = 0; j < o.samples; ++j) {
      const double in = r.lo + (r.hi - r.lo) * j / (o.samples - 1);
      filreg_map_sample m;
      check(upper ? filreg_upper_map(z.get(), phi.get(), &p, in, &m)
                  : filreg_lower_map(z.get(), phi.get(), &p, in, &m));
      r.s.push_back(m);
    }
    check(filreg_predicted_targets(z.get(), phi.get(), &p, &r.targets));
  });

  std::ostringstream csv;
  csv << header_block(o) << (upper ? "eps,y_in,y_out,band_crossings\n" : "eps,x_in,y_out,band_crossings\n");
  Json rows = Json::array();
  std::vector<double> fx, fy;
  const double q = 1.0 - o.lambda / filreg_lambda_star(o.k, o.n);
  for (size_t i = 0; i < eps.size(); ++i) {
    double mn = 1e300, mx = -1e300, lmax = -1e300;
    bool two = true;
    for (const auto& m : res[i].s) {
      csv << num(eps[i]) << "," << num(m.input) << "," << num(m.output) << "," << m.band_crossings << "\n";
      mn = std::min(mn, m.output);
      mx = std::max(mx, m.output);
      lmax = std::max(lmax, m.log_derivative);
      two = two && m.band_crossings == 2;
    }
    const double diam = mx - mn;
    // integral of |dU/din| by the trapezoid rule, in logs
    const auto& s = res[i].s;
    double acc = 0.0;
    for (size_t j = 0; j < s.size(); ++j)
      acc += ((j == 0 || j + 1 == s.size()) ? 0.5 : 1.0) * std::exp(s[j].log_derivative - lmax);
    const double log_var = lmax + std::log(acc * std::abs(res[i].hi - res[i].lo) / (s.size() - 1));
    Json r{{"eps", eps[i]},
           {"input_lo", res[i].lo},
           {"input_hi", res[i].hi},
           {"diameter", diam},
           {"relative_diameter", diam / std::abs(res[i].hi - res[i].lo)},
           {"log_diameter_variational", log_var},
           {"output_mean", 0.5 * (mx + mn)},
           {"y_theta_predicted", res[i].targets.y_theta},
           {"x_eps", res[i].targets.x_eps},
           {"beta_hat", res[i].targets.beta_hat}};
    if (upper) r["two_crossings"] = two;
    rows.push_back(r);
    if (std::isfinite(log_var)) {
      fx.push_back(std::pow(eps[i], -q));
      fy.push_back(log_var);
    }
  }
  write_file(o.out, upper ? "upper_map.csv" : "lower_map.csv", csv.str());
  Json j{{"q", q}, {"rows", rows}};
  filreg_fit f;
  if (fx.size() >= 3 && filreg_linear_fit(fx.data(), fy.data(), fx.size(), &f) == FILREG_OK)
    j["contraction_fit"] = fit_json(f, false);
  return j;
}

Json run_slow_manifold(const Options& o) {
  SystemPtr z = make_system(o);
  PhiPtr phi = make_phi(o.phi_m);
  filreg_params p = params_of(o, o.eps);
  const int n = o.points;
  std::vector<double> x(n), m0(n), m1(n), proxy(n), lower(n);
  double kmin = 0.0;
  int all = 0, upper_all = 0;
  check(filreg_slow_manifold(z.get(), phi.get(), &p, o.K, n, x.data(), m0.data(), m1.data(), proxy.data(),
                             lower.data(), &kmin, &all, &upper_all));
  const double K = o.K > 0 ? o.K : kmin;
  if (o.K <= 0) {
    // Re-evaluate the bound with the minimal K so the table is self-consistent.
    check(filreg_slow_manifold(z.get(), phi.get(), &p, K, n, x.data(), m0.data(), m1.data(), proxy.data(),
                               lower.data(), &kmin, &all, &upper_all));
  }
  std::ostringstream csv;
  csv << header_block(o) << "x,m0,m1,m_proxy,lower_bound\n";
  for (int i = 0; i < n; ++i)
    csv << num(x[i]) << "," << num(m0[i]) << "," << num(m1[i]) << "," << num(proxy[i]) << "," << num(lower[i]) << "\n";
  write_file(o.out, "slow_manifold.csv", csv.str());
  double lim = 0.0;
  check(filreg_limit_coefficient(z.get(), phi.get(), &p, &lim));
  return Json{{"K", K}, {"K_min", kmin}, {"all_hold", bool(all)}, {"upper_all_hold", bool(upper_all)},
              {"limit_coefficient", lim}};
}

Json run_chart(const Options& o) {
  SystemPtr z = make_system(o);
  PhiPtr phi = make_phi(o.phi_m);
  filreg_chart_report r;
  check(filreg_chart(z.get(), phi.get(), o.k, o.n, &r));
  return Json{{"k", r.k},           {"n", r.theorem_n},
              {"alpha", r.alpha},   {"sigma", r.sigma},
              {"u_star", r.u_star}, {"u_star_check", r.u_star_check},
              {"c_x", r.c_x},       {"c_y", r.c_y},
              {"eta", r.eta},       {"x1_star", r.x1_star},
              {"lambda1", r.lambda1}, {"residual", r.residual},
              {"lambda1_numeric", r.lambda1_numeric}};
}

Json run_cycle(const Options& o) {
  SystemPtr z = make_system(o);
  PhiPtr phi = make_phi(o.phi_m);
  std::vector<double> eps = eps_grid(o);
  filreg_polyline* raw = nullptr;
  check(filreg_boundary_cycle_curve(o.k, 1e-3, &raw));
  PolyPtr gamma(raw, filreg_polyline_free);
  double T = 0.0;
  check(filreg_boundary_cycle_period(z.get(), &T));

  struct PerEps {
    filreg_cycle_result r{};
    double hausdorff = 0.0;
    std::vector<std::array<double, 2>> pts;
  };
  std::vector<PerEps> res(eps.size());
  parallel_for(eps.size(), o.workers, [&](size_t i) {
    filreg_params p = params_of(o, eps[i]);
    filreg_polyline* c = nullptr;
    check(filreg_find_cycle(z.get(), phi.get(), &p, o.direction, &res[i].r, &c));
    PolyPtr cyc(c, filreg_polyline_free);
    check(filreg_hausdorff(cyc.get(), gamma.get(), &res[i].hausdorff));
    for (size_t j = 0; j < filreg_polyline_size(cyc.get()); ++j) {
      std::array<double, 2> pt;
      check(filreg_polyline_point(cyc.get(), j, pt.data()));
      res[i].pts.push_back(pt);
    }
  });

  Json rows = Json::array();
  for (size_t i = 0; i < eps.size(); ++i) {
    const auto& r = res[i].r;
    std::ostringstream csv;
    csv << header_block(o) << "# cycle eps = " << num(eps[i]) << "\nx,y\n";
    for (const auto& pt : res[i].pts) csv << num(pt[0]) << "," << num(pt[1]) << "\n";
    const std::string name = "cycle_" + std::to_string(i) + ".csv";
    write_file(o.out, name, csv.str());
    rows.push_back({{"eps", eps[i]},
                    {"window", {r.window_lo, r.window_hi}},
                    {"fixed_point", r.fixed_point},
                    {"period", r.period},
                    {"multiplier", r.multiplier},
                    {"log_multiplier", r.log_multiplier},
                    {"multiplier_fd", r.multiplier_fd},
                    {"multiplier_fd_resolution", r.fd_resolution},
                    {"multiplier_fd_resolved", bool(r.fd_resolved)},
                    {"hausdorff", res[i].hausdorff},
                    {"hausdorff_over_eps", res[i].hausdorff / eps[i]},
                    {"polyline", name}});
  }
  return Json{{"period_gamma", T}, {"log_multiplier_gamma", -2.0 * o.k * T}, {"rows", rows}};
}

void add_common(CLI::App& app, Options& o) {
  app.add_option("--scenario", o.scenario, "canonical, boundary-cycle, boundary-cycle-reversed, boundary-cycle-unstable");
  app.add_option("--k", o.k, "contact half-multiplicity");
  app.add_option("--n", o.n, "theorem n (default max(2, 2k-1))");
  app.add_option("--phi-m,--m", o.phi_m, "transition function phi_m (default n-1)");
  app.add_option("--alpha", o.alpha, "leading coefficient of the canonical system");
  app.add_option("--vartheta", o.vartheta, "constant vartheta of the canonical system");
  app.add_option("--eps", o.eps, "regularization parameter");
  app.add_option("--eps-decades", o.eps_decades, "eps grid lo:hi");
  app.add_option("--points", o.points, "grid points");
  app.add_option("--rho", o.rho, "source section x = -rho");
  app.add_option("--theta", o.theta, "target section x = theta");
  app.add_option("--lambda", o.lambda, "window exponent (default lambda*/2)");
  app.add_option("--yhat0", o.yhat0, "lower-map intermediate level");
  app.add_option("--L", o.L, "slow-manifold start abscissa -L");
  app.add_option("--rtol", o.rtol, "integrator relative tolerance");
  app.add_option("--atol", o.atol, "integrator absolute tolerance");
  app.add_option("--t-max", o.t_max, "time budget");
  app.add_option("--workers", o.workers, "worker threads for sweeps");
  app.add_option("--out", o.out, "output directory");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"filreg-cli: regularized Filippov systems near visible tangencies"};
  app.set_config("--config", "", "key = value file; [subcommand] sections hold subcommand keys");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.fallthrough();
  app.require_subcommand(1);
  Options o;
  add_common(app, o);

  auto* sim = app.add_subcommand("simulate", "flow of the regularized system with band events");
  sim->add_option("--x0", o.x0);
  sim->add_option("--y0", o.y0);
  sim->add_option("--spacing", o.spacing, "arc-length sample spacing (0: step ends)");
  app.add_subcommand("scaling", "x_eps and psi sweeps with power-law fits");
  auto* up = app.add_subcommand("upper-map", "upper transition map sweeps and contraction fit");
  auto* lo = app.add_subcommand("lower-map", "lower transition map sweeps and contraction fit");
  for (auto* s : {up, lo}) s->add_option("--samples", o.samples, "inputs per eps");
  auto* sm = app.add_subcommand("slow-manifold", "m0, m1, trajectory proxy and sandwich check");
  sm->add_option("--K", o.K, "sandwich constant (default: minimal K)");
  app.add_subcommand("chart", "blow-up chart constants and eta");
  auto* cy = app.add_subcommand("cycle", "boundary limit cycle: fixed point, multiplier, Hausdorff distance");
  cy->add_option("--direction", o.direction, "crossing direction of x = -rho");
  app.add_subcommand("phi", "transition function coefficients and invariants");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    const Json err{{"error", {{"code", FILREG_E_PARSE}, {"name", filreg_error_name(FILREG_E_PARSE)},
                              {"message", e.what()}}}};
    std::cout << dump_json(err);
    return 2;
  }
  o.subcommand = app.get_subcommands().front()->get_name();

  Json summary;
  try {
    resolve(o);
    Json result;
    if (o.subcommand == "phi") result = run_phi(o);
    else if (o.subcommand == "simulate") result = run_simulate(o);
    else if (o.subcommand == "scaling") result = run_scaling(o);
    else if (o.subcommand == "upper-map") result = run_map(o, true);
    else if (o.subcommand == "lower-map") result = run_map(o, false);
    else if (o.subcommand == "slow-manifold") result = run_slow_manifold(o);
    else if (o.subcommand == "chart") result = run_chart(o);
    else result = run_cycle(o);
    summary = Json{{"config", config_json(o)}, {"result", result}};
    const std::string text = dump_json(summary);
    write_file(o.out, "summary.json", text);
    std::cout << text;
    return 0;
  } catch (const ApiError& e) {
    summary = Json{{"config", config_json(o)},
                   {"error", {{"code", e.code}, {"name", filreg_error_name(e.code)}, {"message", e.message}}}};
  } catch (const std::exception& e) {
    summary = Json{{"config", config_json(o)},
                   {"error", {{"code", FILREG_E_INVALID_ARGUMENT},
                              {"name", filreg_error_name(FILREG_E_INVALID_ARGUMENT)},
                              {"message", e.what()}}}};
  }
  const std::string text = dump_json(summary);
  std::cout << text;
  try {
    write_file(o.out, "summary.json", text);
  } catch (const std::exception&) {
  }
  return 2;
}
