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

#include "cli_config.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "filreg/filreg.h"

namespace filreg_cli {

namespace {

bool is_cycle_scenario(const std::string& s) { return s.rfind("boundary-cycle", 0) == 0; }

void dump(const Json& j, int indent, int depth, std::ostringstream& os) {
  const std::string pad(static_cast<size_t>(indent * (depth + 1)), ' ');
  const std::string end(static_cast<size_t>(indent * depth), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ",\n";
        first = false;
        os << pad << Json(it.key()).dump() << ": ";
        dump(it.value(), indent, depth + 1, os);
      }
      os << "\n" << end << "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << "[\n";
      for (size_t i = 0; i < j.size(); ++i) {
        if (i) os << ",\n";
        os << pad;
        dump(j[i], indent, depth + 1, os);
      }
      os << "\n" << end << "]";
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      os << (std::isfinite(v) ? num(v) : "null");
      return;
    }
    default:
      os << j.dump();
  }
}

}  // namespace

void resolve(Options& o) {
  if (o.k < 1) throw std::invalid_argument("--k must be >= 1");
  if (o.n == 0) o.n = std::max(2, 2 * o.k - 1);
  if (o.phi_m == 0) o.phi_m = o.n - 1;
  const bool cyc = o.subcommand == "cycle";
  if (o.rho == 0.0) o.rho = cyc ? 0.6 : 0.3;
  if (o.theta == 0.0) o.theta = cyc ? 0.6 : 0.3;
  if (o.lambda == 0.0) o.lambda = cyc ? 0.27 : 0.5 * filreg_lambda_star(o.k, o.n);
  if (o.rtol == 0.0) o.rtol = cyc ? 1e-12 : 1e-10;
  if (o.atol == 0.0) o.atol = cyc ? 1e-14 : 1e-12;
  if (o.t_max == 0.0) o.t_max = o.subcommand == "simulate" ? 2.0 : cyc ? 200.0 : 1e3;
  if (cyc && !is_cycle_scenario(o.scenario)) o.scenario = "boundary-cycle";
  if (o.workers < 1) o.workers = 1;
  if (o.points < 2) throw std::invalid_argument("--points must be >= 2");
  if (!(o.eps > 0)) throw std::invalid_argument("--eps must be positive");
}

std::vector<std::pair<std::string, std::string>> config_pairs(const Options& o) {
  std::vector<std::pair<std::string, std::string>> p{
      {"subcommand", o.subcommand},
      {"scenario", o.scenario},
      {"k", std::to_string(o.k)},
      {"n", std::to_string(o.n)},
      {"phi-m", std::to_string(o.phi_m)},
      {"alpha", num(o.alpha)},
      {"vartheta", num(o.vartheta)},
      {"eps", num(o.eps)},
      {"eps-decades", o.eps_decades.empty() ? "none" : o.eps_decades},
      {"points", std::to_string(o.points)},
      {"rho", num(o.rho)},
      {"theta", num(o.theta)},
      {"lambda", num(o.lambda)},
      {"yhat0", num(o.yhat0)},
      {"L", o.L > 0 ? num(o.L) : "auto"},
      {"rtol", num(o.rtol)},
      {"atol", num(o.atol)},
      {"t-max", num(o.t_max)},
      {"workers", std::to_string(o.workers)},
      {"out", o.out}};
  if (o.subcommand == "simulate") {
    p.push_back({"x0", num(o.x0)});
    p.push_back({"y0", num(o.y0)});
    p.push_back({"spacing", num(o.spacing)});
  }
  if (o.subcommand == "upper-map" || o.subcommand == "lower-map")
    p.push_back({"samples", std::to_string(o.samples)});
  if (o.subcommand == "slow-manifold") p.push_back({"K", num(o.K)});
  if (o.subcommand == "cycle") p.push_back({"direction", std::to_string(o.direction)});
  return p;
}

std::string header_block(const Options& o) {
  std::ostringstream os;
  os << "# filreg " << filreg_version() << "\n";
  for (const auto& [k, v] : config_pairs(o)) os << "# " << k << " = " << v << "\n";
  return os.str();
}

std::vector<double> eps_grid(const Options& o) {
  if (o.eps_decades.empty()) return {o.eps};
  const auto colon = o.eps_decades.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("--eps-decades expects lo:hi");
  const double lo = std::stod(o.eps_decades.substr(0, colon));
  const double hi = std::stod(o.eps_decades.substr(colon + 1));
  if (!(lo > 0 && hi > lo)) throw std::invalid_argument("--eps-decades needs 0 < lo < hi");
  std::vector<double> g(static_cast<size_t>(o.points));
  for (int i = 0; i < o.points; ++i) g[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (o.points - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string dump_json(const Json& j, int indent) {
  std::ostringstream os;
  dump(j, indent, 0, os);
  os << "\n";
  return os.str();
}

void write_file(const std::string& dir, const std::string& name, const std::string& text) {
  std::filesystem::create_directories(dir);
  const auto path = std::filesystem::path(dir) / name;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
}

}  // namespace filreg_cli
