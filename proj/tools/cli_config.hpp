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
#include <utility>
#include <vector>

#include "json.hpp"

namespace filreg_cli {

using Json = nlohmann::ordered_json;

// Every flag of every subcommand.  Zero or NaN marks "use the subcommand
// default"; resolve() fills those in.
struct Options {
  std::string subcommand;
  std::string scenario = "canonical";
  int k = 1;
  int n = 0;
  int phi_m = 0;
  double alpha = 1.0;
  double vartheta = 0.0;
  double eps = 1e-3;
  std::string eps_decades;
  int points = 9;
  double rho = 0.0;
  double theta = 0.0;
  double lambda = 0.0;
  double yhat0 = 0.9;
  double L = 0.0;
  double rtol = 0.0;
  double atol = 0.0;
  double t_max = 0.0;
  int workers = 4;
  std::string out = "filreg-out";
  // simulate
  double x0 = -0.3;
  double y0 = 0.1;
  double spacing = 0.0;
  // upper-map / lower-map
  int samples = 9;
  // slow-manifold
  double K = 0.0;
  // cycle
  int direction = 1;
};

void resolve(Options& o);

// (key, value) pairs of the resolved configuration in a fixed order.
std::vector<std::pair<std::string, std::string>> config_pairs(const Options& o);

// "# key = value" block echoed at the top of every output file.
std::string header_block(const Options& o);

// eps_decades "lo:hi" with `points` log-spaced values, else {eps}.
std::vector<double> eps_grid(const Options& o);

// 17 significant digits.
std::string num(double v);

// JSON text with every floating value printed by num().
std::string dump_json(const Json& j, int indent = 2);

void write_file(const std::string& dir, const std::string& name, const std::string& text);

}  // namespace filreg_cli
