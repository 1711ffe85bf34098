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

#include "cycles.hpp"

#include <algorithm>
#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <numbers>
#include <unordered_map>

#include "error.hpp"
#include "fit.hpp"

namespace filreg {

// ---------------------------------------------------------------- Hausdorff

namespace {

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const double dx = b[0] - a[0], dy = b[1] - a[1];
  const double l2 = dx * dx + dy * dy;
  double t = l2 > 0 ? ((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / l2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p[0] - a[0] - t * dx, p[1] - a[1] - t * dy);
}

// Uniform grid over the segments of a polyline.
class SegmentGrid {
 public:
  explicit SegmentGrid(const Polyline& b) : b_(b) {
    xmin_ = ymin_ = 1e300;
    double xmax = -1e300, ymax = -1e300;
    for (const auto& p : b) {
      xmin_ = std::min(xmin_, p[0]);
      ymin_ = std::min(ymin_, p[1]);
      xmax = std::max(xmax, p[0]);
      ymax = std::max(ymax, p[1]);
    }
    const double span = std::max({xmax - xmin_, ymax - ymin_, 1e-12});
    cell_ = span / 256.0;
    ni_ = ix(xmax);
    nj_ = iy(ymax);
    nseg_ = b.size() > 1 ? b.size() - 1 : 1;
    for (std::size_t s = 0; s < nseg_; ++s) {
      const Vec2& p = b[s];
      const Vec2& q = b.size() > 1 ? b[s + 1] : b[s];
      const long i0 = ix(std::min(p[0], q[0])), i1 = ix(std::max(p[0], q[0]));
      const long j0 = iy(std::min(p[1], q[1])), j1 = iy(std::max(p[1], q[1]));
      for (long i = i0; i <= i1; ++i)
        for (long j = j0; j <= j1; ++j) cells_[key(i, j)].push_back(s);
    }
  }

  double distance(const Vec2& p) const {
    const long ci = ix(p[0]), cj = iy(p[1]);
    double best = 1e300;
    auto visit = [&](long i, long j) {
      auto it = cells_.find(key(i, j));
      if (it == cells_.end()) return;
      for (std::size_t s : it->second) {
        const Vec2& a = b_[s];
        const Vec2& q = b_.size() > 1 ? b_[s + 1] : b_[s];
        best = std::min(best, point_segment_distance(p, a, q));
      }
    };
    // Rings closer than the grid itself are empty.
    const long di = ci < 0 ? -ci : std::max(0L, ci - ni_), dj = cj < 0 ? -cj : std::max(0L, cj - nj_);
    for (long r = std::max(di, dj);; ++r) {
      // Every segment not yet visited is at least (r - 1) cells away.
      if (best <= (r - 1) * cell_) break;
      if (ci - r < 0 && cj - r < 0 && ci + r > ni_ && cj + r > nj_) break;
      if (r == 0) {
        visit(ci, cj);
        continue;
      }
      // Ring cells clipped to the occupied range.
      const long i0 = std::max(ci - r, 0L), i1 = std::min(ci + r, ni_);
      const long j0 = std::max(cj - r + 1, 0L), j1 = std::min(cj + r - 1, nj_);
      for (long i = i0; i <= i1; ++i) {
        if (cj - r >= 0 && cj - r <= nj_) visit(i, cj - r);
        if (cj + r >= 0 && cj + r <= nj_) visit(i, cj + r);
      }
      for (long j = j0; j <= j1; ++j) {
        if (ci - r >= 0 && ci - r <= ni_) visit(ci - r, j);
        if (ci + r >= 0 && ci + r <= ni_) visit(ci + r, j);
      }
    }
    return best;
  }

 private:
  long ix(double x) const { return static_cast<long>(std::floor((x - xmin_) / cell_)); }
  long iy(double y) const { return static_cast<long>(std::floor((y - ymin_) / cell_)); }
  static long long key(long i, long j) { return (static_cast<long long>(i) << 32) ^ (j & 0xffffffffLL); }

  const Polyline& b_;
  double xmin_, ymin_, cell_;
  long ni_ = 0, nj_ = 0;
  std::size_t nseg_;
  std::unordered_map<long long, std::vector<std::size_t>> cells_;
};

double directed_hausdorff(const Polyline& a, const Polyline& b) {
  SegmentGrid g(b);
  double d = 0.0;
  for (const auto& p : a) d = std::max(d, g.distance(p));
  return d;
}

}  // namespace

double hausdorff_distance(const Polyline& a, const Polyline& b) {
  if (a.empty() || b.empty()) fail(Errc::InvalidArgument, "Hausdorff distance of an empty polyline");
  return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

Polyline boundary_cycle_polyline(int k, double max_segment) {
  if (k < 1 || !(max_segment > 0)) fail(Errc::InvalidArgument, "bad polyline request");
  auto pt = [k](double t) {
    const double c = std::cos(t), s = std::sin(t);
    const double x = std::copysign(std::pow(std::abs(c), 1.0 / k), c);
    const double y = 1.0 + std::copysign(std::pow(std::abs(s), 1.0 / k), s);
    return Vec2{x, y};
  };
  Polyline out;
  const int base = 4096;
  const double two_pi = 2.0 * std::numbers::pi;
  std::function<void(double, double, const Vec2&, const Vec2&, int)> refine =
      [&](double t0, double t1, const Vec2& p0, const Vec2& p1, int depth) {
        if (depth > 40 || std::hypot(p1[0] - p0[0], p1[1] - p0[1]) <= max_segment) {
          out.push_back(p1);
          return;
        }
        const double tm = 0.5 * (t0 + t1);
        const Vec2 pm = pt(tm);
        refine(t0, tm, p0, pm, depth + 1);
        refine(tm, t1, pm, p1, depth + 1);
      };
  out.push_back(pt(0.0));
  for (int i = 0; i < base; ++i) {
    const double t0 = two_pi * i / base, t1 = two_pi * (i + 1) / base;
    refine(t0, t1, pt(t0), i + 1 == base ? pt(0.0) : pt(t1), 0);
  }
  return out;
}

double boundary_cycle_period(const FilippovSystem& z, const IntegratorConfig& ode) {
  HybridConfig hc;
  hc.ode = ode;
  hc.t_max = 1e3;
  std::vector<Section> sec{{SectionKind::Vertical, 0.0, -1, true, 0}};
  HybridResult r = smooth_flow(z.plus, 0.0, 2.0, sec, hc);
  if (r.status != HybridStatus::Section) fail(Errc::NoReturn, "orbit through (0, 2) did not close");
  return r.t;
}

ExteriorSample exterior_map(const FilippovSystem& z, double theta, double rho, double y,
                            const IntegratorConfig& ode, double t_max) {
  HybridConfig hc;
  hc.ode = ode;
  hc.t_max = t_max;
  hc.window = z.plus.domain;
  std::vector<Section> sec{{SectionKind::Vertical, -rho, +1, true, 0}};
  HybridResult r = smooth_flow(z.plus, theta, y, sec, hc);
  if (r.status == HybridStatus::LeftWindow) fail(Errc::LeftWindow, "exterior orbit left the window");
  if (r.status != HybridStatus::Section) fail(Errc::NoReturn, "exterior orbit did not reach x = -rho");
  ExteriorSample e;
  e.y_out = r.y;
  e.t = r.t;
  // Transport of a transversal displacement between vertical sections.
  e.derivative = z.plus(theta, y)[0] / z.plus(r.x, r.y)[0] * std::exp(r.log_jac);
  return e;
}

// ---------------------------------------------------------------- return map

TransitionConfig CycleConfig::transition() const {
  TransitionConfig t(z, phi, theorem_n, eps);
  t.rho = rho;
  t.theta = theta;
  t.lambda = lambda;
  t.ode = ode;
  t.t_max = t_max;
  return t;
}

CycleConfig default_cycle_config(const FilippovSystem& z, const TransitionFunction& phi,
                                 int theorem_n, double eps) {
  CycleConfig c(z, phi, theorem_n, eps);
  c.ode.rtol = 1e-12;
  c.ode.atol = 1e-14;
  return c;
}

std::array<double, 2> cycle_window(const CycleConfig& cfg) {
  return {cfg.eps, y_rho_lambda(cfg.transition())};
}

ReturnSample return_map(const CycleConfig& cfg, double y, bool keep_samples) {
  RegularizedField rf = make_regularized(cfg.transition());
  HybridConfig hc;
  hc.ode = cfg.ode;
  hc.t_max = cfg.t_max;
  hc.window = cfg.z.plus.domain;
  hc.sample_spacing = keep_samples ? 1e-3 : -1.0;
  std::vector<Section> sec{{SectionKind::Vertical, -cfg.rho, cfg.direction, true, 0}};
  ReturnSample s;
  s.y_in = y;
  s.path = hybrid_flow(rf, -cfg.rho, y, sec, hc);
  const auto& r = s.path;
  if (r.status == HybridStatus::MaxSwitches) fail(Errc::MaxRevolutions, "too many band switches");
  if (r.status != HybridStatus::Section)
    fail(Errc::NoReturn, std::string("no return to the section: ") + hybrid_status_name(r.status));
  s.y_out = r.y;
  s.period = r.t;
  s.log_multiplier = std::log(std::abs(rf(-cfg.rho, y)[0] / rf(r.x, r.y)[0])) + r.log_jac;
  return s;
}

double return_map_composed(const CycleConfig& cfg, double y) {
  MapSample u = upper_transition_map(cfg.transition(), y);
  return exterior_map(cfg.z, cfg.theta, cfg.rho, u.output, cfg.ode, cfg.t_max).y_out;
}

namespace {

CycleResult locate_fixed_point(const std::function<double(double)>& pi, double a, double b,
                               double tol, int max_iter) {
  if (!(b > a)) fail(Errc::InvalidArgument, "bracket must satisfy a < b");
  CycleResult c;
  auto G = [&](double y) {
    ++c.evaluations;
    return pi(y) - y;
  };
  const double ga = G(a), gb = G(b);
  if (ga == 0.0 || gb == 0.0 || (ga < 0) != (gb < 0)) {
    if (ga == 0.0) {
      c.fixed_point = a;
    } else if (gb == 0.0) {
      c.fixed_point = b;
    } else {
      boost::uintmax_t it = max_iter;
      auto stop = [tol](double u, double v) { return std::abs(u - v) <= tol * std::max(1.0, std::abs(u)); };
      auto r = boost::math::tools::toms748_solve(G, a, b, ga, gb, stop, it);
      c.fixed_point = 0.5 * (r.first + r.second);
      if (static_cast<int>(it) >= max_iter) fail(Errc::NotConverged, "fixed point search did not converge");
    }
    c.converged = true;
    return c;
  }
  // No sign change: accept only if pi contracts on the bracket.
  const double pa = ga + a, pb = gb + b;
  if (!(std::abs(pa - pb) < 0.5 * (b - a))) fail(Errc::NoBracket, "no sign change and no contraction");
  double y = pb;
  for (int i = 0; i < max_iter; ++i) {
    const double yn = pi(y);
    ++c.evaluations;
    if (std::abs(yn - y) <= tol * std::max(1.0, std::abs(y))) {
      c.fixed_point = yn;
      c.converged = true;
      return c;
    }
    y = yn;
  }
  fail(Errc::NotConverged, "fixed point iteration did not converge");
}

}  // namespace

CycleResult find_fixed_point(const std::function<double(double)>& pi, double a, double b,
                             double tol, int max_iter) {
  CycleResult c = locate_fixed_point(pi, a, b, tol, max_iter);
  const double h = 1e-6 * (b - a);
  const double yp = pi(c.fixed_point + h), ym = pi(c.fixed_point - h);
  c.evaluations += 2;
  const double noise = 1e-12 * std::max(1.0, std::abs(c.fixed_point));
  c.multiplier_fd = (yp - ym) / (2 * h);
  c.fd_resolution = noise / (2 * h);
  c.fd_resolved = std::abs(yp - ym) > noise;
  c.multiplier = c.multiplier_fd;
  c.log_multiplier = std::log(std::abs(c.multiplier));
  return c;
}

CycleResult find_cycle(const CycleConfig& cfg, double a, double b) {
  CycleResult c = find_fixed_point([&](double y) { return return_map(cfg, y).y_out; }, a, b);
  ReturnSample s = return_map(cfg, c.fixed_point, true);
  c.period = s.period;
  c.log_multiplier = s.log_multiplier;
  c.multiplier = std::exp(s.log_multiplier);
  for (const auto& p : s.path.samples) c.cycle.push_back({p[1], p[2]});
  return c;
}

// ---------------------------------------------------------------- grazing

double grazing_half_return(const FilippovSystem& z, double eps, GrazingSide side, double x,
                           double target, const IntegratorConfig& ode) {
  HybridConfig hc;
  hc.ode = ode;
  hc.t_max = 1e3;
  hc.window = z.plus.domain;
  const bool up = side == GrazingSide::Upper;
  hc.time_sign = up ? 1.0 : -1.0;
  std::vector<Section> sec{{SectionKind::Vertical, target, up ? +1 : -1, true, 0}};
  HybridResult r = smooth_flow(z.plus, x, eps, sec, hc);
  if (r.status == HybridStatus::LeftWindow) fail(Errc::LeftWindow, "half orbit left the window");
  if (r.status != HybridStatus::Section) fail(Errc::NoCrossing, "half orbit missed the target section");
  return r.y;
}

GrazingFit grazing_fit(const FilippovSystem& z, double eps, const GrazingFitConfig& cfg,
                       const IntegratorConfig& ode) {
  if (cfg.points < 4 || !(cfg.exponent_delta > 0) || !(cfg.kappa_delta > 0) || cfg.k < 1)
    fail(Errc::InvalidArgument, "bad grazing fit request");
  auto T = [&](double x, double target) { return grazing_half_return(z, eps, cfg.side, x, target, ode); };
  auto u_at = [&](double delta, int i) { return delta * std::pow(0.25, 1.0 - static_cast<double>(i) / (cfg.points - 1)); };
  GrazingFit g;

  const double te = T(cfg.psi, cfg.exponent_target);
  std::vector<double> lu, ld;
  for (int i = 0; i < cfg.points; ++i) {
    const double u = u_at(cfg.exponent_delta, i);
    const double s = T(cfg.psi + u, cfg.exponent_target) + T(cfg.psi - u, cfg.exponent_target) - 2.0 * te;
    if (s == 0.0) continue;
    lu.push_back(std::log(u));
    ld.push_back(std::log(std::abs(s)));
  }
  LinearFit lf = linear_fit(lu, ld);
  g.exponent = lf.slope;
  g.exponent_r2 = lf.r2;

  g.extremum = T(cfg.psi, cfg.kappa_target);
  const double sgn = cfg.side == GrazingSide::Upper ? -1.0 : 1.0;
  std::vector<double> us, dt;
  for (int i = 0; i < cfg.points; ++i) {
    const double u = sgn * u_at(cfg.kappa_delta, i);
    us.push_back(u);
    dt.push_back(T(cfg.psi + u, cfg.kappa_target) - g.extremum);
  }
  std::vector<int> powers;
  for (int p = 1; p <= 2 * cfg.k + 1; ++p) powers.push_back(p);
  auto c = power_fit(us, dt, powers);
  g.slope_at_psi = c[0];
  g.kappa = c[2 * cfg.k - 1];
  return g;
}

}  // namespace filreg
