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

#include "hybrid_flow.hpp"

#include <cmath>

#include "error.hpp"

namespace filreg {

namespace {

using Ode = Dop853<3>;
using State = Ode::State;

constexpr int kWindowBase = -10;

// One integration leg in a single mode.  `scale` converts leg time to
// physical time and `ycoord` maps the second state to physical y.
struct Leg {
  Ode::Rhs rhs;
  double scale;
  double ycoord;
  std::vector<Ode::Event> boundary;
};

struct Runner {
  const std::vector<Section>& sections;
  const HybridConfig& cfg;
  HybridResult& out;
  double t = 0.0;

  // Returns the raw integrator result; hits are appended to out.
  Ode::Result run(const Leg& leg, const State& s0) {
    std::vector<Ode::Event> ev = leg.boundary;
    const double ys = leg.ycoord;
    for (const auto& sec : sections) {
      if (sec.id < 0) fail(Errc::InvalidArgument, "section ids must be non-negative");
      Ode::Event e;
      if (sec.kind == SectionKind::Vertical)
        e.g = [c = sec.c](double, const State& s) { return s[0] - c; };
      else
        e.g = [c = sec.c, ys](double, const State& s) { return ys * s[1] - c; };
      e.direction = sec.direction;
      e.terminal = sec.terminal;
      e.id = sec.id;
      ev.push_back(e);
    }
    const Box& w = cfg.window;
    if (std::isfinite(w.xmin) && w.xmin > -1e299)
      ev.push_back({[v = w.xmin](double, const State& s) { return s[0] - v; }, -1, true, kWindowBase});
    if (w.xmax < 1e299)
      ev.push_back({[v = w.xmax](double, const State& s) { return s[0] - v; }, +1, true, kWindowBase - 1});
    if (w.ymin > -1e299)
      ev.push_back({[v = w.ymin, ys](double, const State& s) { return ys * s[1] - v; }, -1, true,
                    kWindowBase - 2});
    if (w.ymax < 1e299)
      ev.push_back({[v = w.ymax, ys](double, const State& s) { return ys * s[1] - v; }, +1, true,
                    kWindowBase - 3});

    Ode ode(leg.rhs, cfg.ode);
    const double remaining = cfg.t_max - std::abs(t);
    const double tau_end = cfg.time_sign * remaining / leg.scale;
    Ode::Observer obs = nullptr;
    if (cfg.sample_spacing >= 0.0) {
      if (out.samples.empty()) out.samples.push_back({t, s0[0], ys * s0[1]});
      obs = [&, ys, t0 = t, sc = leg.scale](const Ode& o, double ta, double tb) {
        State a = o.dense(ta), b = o.dense(tb);
        int m = 1;
        if (cfg.sample_spacing > 0.0) {
          const double d = std::hypot(b[0] - a[0], ys * (b[1] - a[1]));
          m = std::min(10000, std::max(1, static_cast<int>(std::ceil(d / cfg.sample_spacing))));
        }
        for (int i = 1; i <= m; ++i) {
          const double tt = ta + (tb - ta) * i / m;
          State s = i == m ? b : o.dense(tt);
          out.samples.push_back({t0 + sc * tt, s[0], ys * s[1]});
        }
      };
    }
    Ode::Result r = ode.solve(0.0, s0, tau_end, ev, obs);
    out.steps += r.steps;
    for (const auto& h : r.hits)
      out.hits.push_back({t + leg.scale * h.t, h.y[0], ys * h.y[1], h.y[2], h.id, h.direction, h.graze});
    t += leg.scale * r.t;
    return r;
  }
};

HybridStatus map_status(OdeStatus s) {
  switch (s) {
    case OdeStatus::StepUnderflow: return HybridStatus::StepUnderflow;
    case OdeStatus::NonFinite: return HybridStatus::NonFinite;
    default: return HybridStatus::TimeLimit;
  }
}

}  // namespace

const char* hybrid_status_name(HybridStatus s) {
  switch (s) {
    case HybridStatus::Section: return "section";
    case HybridStatus::Boundary: return "boundary";
    case HybridStatus::TimeLimit: return "time-limit";
    case HybridStatus::LeftWindow: return "left-window";
    case HybridStatus::MaxSwitches: return "max-switches";
    case HybridStatus::StepUnderflow: return "step-underflow";
    case HybridStatus::NonFinite: return "non-finite";
  }
  return "?";
}

Mode start_mode(const RegularizedField& rf, double x, double y, double time_sign) {
  const double eps = rf.eps();
  if (y > eps) return Mode::Plus;
  if (y < -eps) return Mode::Minus;
  if (y == eps) return time_sign * rf.base().plus(x, y)[1] >= 0.0 ? Mode::Plus : Mode::Band;
  if (y == -eps) return time_sign * rf.base().minus(x, y)[1] <= 0.0 ? Mode::Minus : Mode::Band;
  return Mode::Band;
}

HybridResult hybrid_flow(const RegularizedField& rf, double x0, double y0,
                         const std::vector<Section>& sections, const HybridConfig& cfg) {
  if (!rf.base().h.is_y()) fail(Errc::NotCanonical, "hybrid flow needs h = y");
  if (!(cfg.t_max > 0)) fail(Errc::InvalidArgument, "t_max must be positive");
  const double eps = rf.eps();
  const auto& plus = rf.base().plus;
  const auto& minus = rf.base().minus;

  Leg lp{[&plus](double, const State& s, State& d) {
           Vec2 v = plus(s[0], s[1]);
           d = {v[0], v[1], plus.divergence(s[0], s[1])};
         },
         1.0, 1.0,
         {{[eps](double, const State& s) { return s[1] - eps; }, -1, true, kTopEntry}}};
  Leg lm{[&minus](double, const State& s, State& d) {
           Vec2 v = minus(s[0], s[1]);
           d = {v[0], v[1], minus.divergence(s[0], s[1])};
         },
         1.0, 1.0,
         {{[eps](double, const State& s) { return s[1] + eps; }, +1, true, kBottomEntry}}};
  Leg lb{[&rf](double, const State& s, State& d) {
           Vec2 v = rf.band_rhs(s[0], s[1]);
           d = {v[0], v[1], rf.band_log_jacobian_rate(s[0], s[1])};
         },
         eps, eps,
         {{[](double, const State& s) { return s[1] - 1.0; }, +1, true, kTopExit},
          {[](double, const State& s) { return s[1] + 1.0; }, -1, true, kBottomExit}}};

  HybridResult out;
  Runner run{sections, cfg, out};
  Mode mode = start_mode(rf, x0, y0, cfg.time_sign);
  State s{x0, mode == Mode::Band ? y0 / eps : y0, 0.0};
  if (y0 == eps) {
    out.hits.push_back({0.0, x0, y0, 0.0, mode == Mode::Band ? kTopEntry : kTopExit,
                        mode == Mode::Band ? -1 : 1, false});
    (mode == Mode::Band ? out.top_entries : out.top_exits)++;
  } else if (y0 == -eps) {
    out.hits.push_back({0.0, x0, y0, 0.0, mode == Mode::Band ? kBottomEntry : kBottomExit,
                        mode == Mode::Band ? 1 : -1, false});
    (mode == Mode::Band ? out.bottom_entries : out.bottom_exits)++;
  }

  int switches = 0;
  while (true) {
    const Leg& leg = mode == Mode::Plus ? lp : mode == Mode::Minus ? lm : lb;
    Ode::Result r = run.run(leg, s);
    out.mode = mode;
    out.x = r.y[0];
    out.y = leg.ycoord * r.y[1];
    out.log_jac = r.y[2];
    out.t = run.t;
    if (r.status != OdeStatus::Event) {
      out.status = map_status(r.status);
      return out;
    }
    const int id = out.hits.back().id;
    out.stop_id = id;
    if (id >= 0) {
      out.status = HybridStatus::Section;
      return out;
    }
    if (id <= kWindowBase) {
      out.status = HybridStatus::LeftWindow;
      return out;
    }
    unsigned bit = 0;
    switch (id) {
      case kTopEntry:
        ++out.top_entries;
        bit = kStopTopEntry;
        mode = Mode::Band;
        s = {r.y[0], 1.0, r.y[2]};
        break;
      case kTopExit:
        ++out.top_exits;
        bit = kStopTopExit;
        mode = Mode::Plus;
        s = {r.y[0], eps, r.y[2]};
        break;
      case kBottomExit:
        ++out.bottom_exits;
        bit = kStopBottomExit;
        mode = Mode::Minus;
        s = {r.y[0], -eps, r.y[2]};
        break;
      case kBottomEntry:
        ++out.bottom_entries;
        bit = kStopBottomEntry;
        mode = Mode::Band;
        s = {r.y[0], -1.0, r.y[2]};
        break;
      default: fail(Errc::Internal, "unknown boundary id");
    }
    if (cfg.terminal_boundaries & bit) {
      out.status = HybridStatus::Boundary;
      return out;
    }
    if (++switches > cfg.max_switches) {
      out.status = HybridStatus::MaxSwitches;
      return out;
    }
  }
}

HybridResult smooth_flow(const PlanarField& f, double x0, double y0,
                         const std::vector<Section>& sections, const HybridConfig& cfg) {
  if (!(cfg.t_max > 0)) fail(Errc::InvalidArgument, "t_max must be positive");
  Leg leg{[&f](double, const State& s, State& d) {
            Vec2 v = f(s[0], s[1]);
            d = {v[0], v[1], f.divergence(s[0], s[1])};
          },
          1.0, 1.0, {}};
  HybridResult out;
  Runner run{sections, cfg, out};
  Ode::Result r = run.run(leg, State{x0, y0, 0.0});
  out.x = r.y[0];
  out.y = r.y[1];
  out.log_jac = r.y[2];
  out.t = run.t;
  if (r.status != OdeStatus::Event) {
    out.status = map_status(r.status);
    return out;
  }
  out.stop_id = out.hits.back().id;
  out.status = out.stop_id >= 0 ? HybridStatus::Section : HybridStatus::LeftWindow;
  return out;
}

}  // namespace filreg
