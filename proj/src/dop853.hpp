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

// Dormand-Prince 8(5,3) with the seventh-order dense output of Hairer and
// Wanner's DOP853, plus event location on the dense output.

#pragma once

#include <algorithm>
#include <array>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

namespace filreg {

struct IntegratorConfig {
  double rtol = 1e-10;
  double atol = 1e-12;
  double max_step = std::numeric_limits<double>::infinity();
  double event_tol = 1e-12;
  double max_time = 1e6;
  long max_steps = 50'000'000;
};

enum class OdeStatus { Completed, Event, StepUnderflow, MaxSteps, NonFinite };

// Sub-intervals of each accepted step checked for event sign changes.
constexpr int kEventSubdivisions = 8;

template <std::size_t N>
class Dop853 {
 public:
  using State = std::array<double, N>;
  using Rhs = std::function<void(double, const State&, State&)>;

  struct Event {
    std::function<double(double, const State&)> g;
    int direction = 0;  // +1: g increases along the run, -1: decreases, 0: both
    bool terminal = true;
    int id = 0;
  };

  struct Hit {
    double t;
    State y;
    int id;
    int direction;
    bool graze;
  };

  struct Result {
    OdeStatus status = OdeStatus::Completed;
    double t = 0.0;
    State y{};
    std::vector<Hit> hits;
    long steps = 0;
    int stop_event = -1;  // index into the event list when status == Event
  };

  // Called after each accepted step with (t_old, t_new); dense() is valid.
  using Observer = std::function<void(const Dop853&, double, double)>;

  Dop853(Rhs f, IntegratorConfig cfg) : f_(std::move(f)), cfg_(cfg) {}

  Result solve(double t0, const State& y0, double t_end, const std::vector<Event>& events = {},
               const Observer& obs = nullptr);

  // Seventh-order interpolant on the last accepted step.
  State dense(double t) const {
    const double s = (t - told_) / hold_, s1 = 1.0 - s;
    State r;
    for (std::size_t i = 0; i < N; ++i)
      r[i] = rc_[0][i] +
             s * (rc_[1][i] +
                  s1 * (rc_[2][i] +
                        s * (rc_[3][i] +
                             s1 * (rc_[4][i] + s * (rc_[5][i] + s1 * (rc_[6][i] + s * rc_[7][i]))))));
    return r;
  }

 private:
  void step12();
  double error_estimate() const;
  double initial_step(double hmax, double dir);
  void prepare_dense();

  Rhs f_;
  IntegratorConfig cfg_;
  double t_ = 0, h_ = 0, told_ = 0, hold_ = 1;
  State y_{}, ynew_{}, tmp_{};
  State k1_{}, k2_{}, k3_{}, k4_{}, k5_{}, k6_{}, k7_{}, k8_{}, k9_{}, k10_{};
  std::array<State, 8> rc_{};
  bool dense_ready_ = false;
  State yold_{}, k1old_{};  // start of the accepted step, for dense output
};

// Coefficients of Hairer's DOP853.
namespace dop853_coef {
constexpr double c2 = 0.526001519587677318785587544488E-01, c3 = 0.789002279381515978178381316732E-01,
                 c4 = 0.118350341907227396726757197510E+00, c5 = 0.281649658092772603273242802490E+00,
                 c6 = 0.333333333333333333333333333333E+00, c7 = 0.25E+00,
                 c8 = 0.307692307692307692307692307692E+00, c9 = 0.651282051282051282051282051282E+00,
                 c10 = 0.6E+00, c11 = 0.857142857142857142857142857142E+00, c14 = 0.1E+00,
                 c15 = 0.2E+00, c16 = 0.777777777777777777777777777778E+00;
constexpr double b1 = 5.42937341165687622380535766363E-2, b6 = 4.45031289275240888144113950566E0,
                 b7 = 1.89151789931450038304281599044E0, b8 = -5.8012039600105847814672114227E0,
                 b9 = 3.1116436695781989440891606237E-1, b10 = -1.52160949662516078556178806805E-1,
                 b11 = 2.01365400804030348374776537501E-1, b12 = 4.47106157277725905176885569043E-2;
constexpr double bhh1 = 0.244094488188976377952755905512E+00, bhh2 = 0.733846688281611857341361741547E+00,
                 bhh3 = 0.220588235294117647058823529412E-01;
constexpr double er1 = 0.1312004499419488073250102996E-01, er6 = -0.1225156446376204440720569753E+01,
                 er7 = -0.4957589496572501915214079952E+00, er8 = 0.1664377182454986536961530415E+01,
                 er9 = -0.3503288487499736816886487290E+00, er10 = 0.3341791187130174790297318841E+00,
                 er11 = 0.8192320648511571246570742613E-01, er12 = -0.2235530786388629525884427845E-01;
constexpr double a21 = 5.26001519587677318785587544488E-2, a31 = 1.97250569845378994544595329183E-2,
                 a32 = 5.91751709536136983633785987549E-2, a41 = 2.95875854768068491816892993775E-2,
                 a43 = 8.87627564304205475450678981324E-2, a51 = 2.41365134159266685502369798665E-1,
                 a53 = -8.84549479328286085344864962717E-1, a54 = 9.24834003261792003115737966543E-1,
                 a61 = 3.7037037037037037037037037037E-2, a64 = 1.70828608729473871279604482173E-1,
                 a65 = 1.25467687566822425016691814123E-1, a71 = 3.7109375E-2,
                 a74 = 1.70252211019544039314978060272E-1, a75 = 6.02165389804559606850219397283E-2,
                 a76 = -1.7578125E-2;
constexpr double a81 = 3.70920001185047927108779319836E-2, a84 = 1.70383925712239993810214054705E-1,
                 a85 = 1.07262030446373284651809199168E-1, a86 = -1.53194377486244017527936158236E-2,
                 a87 = 8.27378916381402288758473766002E-3, a91 = 6.24110958716075717114429577812E-1,
                 a94 = -3.36089262944694129406857109825E0, a95 = -8.68219346841726006818189891453E-1,
                 a96 = 2.75920996994467083049415600797E1, a97 = 2.01540675504778934086186788979E1,
                 a98 = -4.34898841810699588477366255144E1, a101 = 4.77662536438264365890433908527E-1,
                 a104 = -2.48811461997166764192642586468E0, a105 = -5.90290826836842996371446475743E-1,
                 a106 = 2.12300514481811942347288949897E1, a107 = 1.52792336328824235832596922938E1,
                 a108 = -3.32882109689848629194453265587E1, a109 = -2.03312017085086261358222928593E-2;
constexpr double a111 = -9.3714243008598732571704021658E-1, a114 = 5.18637242884406370830023853209E0,
                 a115 = 1.09143734899672957818500254654E0, a116 = -8.14978701074692612513997267357E0,
                 a117 = -1.85200656599969598641566180701E1, a118 = 2.27394870993505042818970056734E1,
                 a119 = 2.49360555267965238987089396762E0, a1110 = -3.0467644718982195003823669022E0,
                 a121 = 2.27331014751653820792359768449E0, a124 = -1.05344954667372501984066689879E1,
                 a125 = -2.00087205822486249909675718444E0, a126 = -1.79589318631187989172765950534E1,
                 a127 = 2.79488845294199600508499808837E1, a128 = -2.85899827713502369474065508674E0,
                 a129 = -8.87285693353062954433549289258E0, a1210 = 1.23605671757943030647266201528E1,
                 a1211 = 6.43392746015763530355970484046E-1;
constexpr double a141 = 5.61675022830479523392909219681E-2, a147 = 2.53500210216624811088794765333E-1,
                 a148 = -2.46239037470802489917441475441E-1, a149 = -1.24191423263816360469010140626E-1,
                 a1410 = 1.5329179827876569731206322685E-1, a1411 = 8.20105229563468988491666602057E-3,
                 a1412 = 7.56789766054569976138603589584E-3, a1413 = -8.298E-3;
constexpr double a151 = 3.18346481635021405060768473261E-2, a156 = 2.83009096723667755288322961402E-2,
                 a157 = 5.35419883074385676223797384372E-2, a158 = -5.49237485713909884646569340306E-2,
                 a1511 = -1.08347328697249322858509316994E-4, a1512 = 3.82571090835658412954920192323E-4,
                 a1513 = -3.40465008687404560802977114492E-4, a1514 = 1.41312443674632500278074618366E-1;
constexpr double a161 = -4.28896301583791923408573538692E-1, a166 = -4.69762141536116384314449447206E0,
                 a167 = 7.68342119606259904184240953878E0, a168 = 4.06898981839711007970213554331E0,
                 a169 = 3.56727187455281109270669543021E-1, a1613 = -1.39902416515901462129418009734E-3,
                 a1614 = 2.9475147891527723389556272149E0, a1615 = -9.15095847217987001081870187138E0;
constexpr double d41 = -0.84289382761090128651353491142E+01, d46 = 0.56671495351937776962531783590E+00,
                 d47 = -0.30689499459498916912797304727E+01, d48 = 0.23846676565120698287728149680E+01,
                 d49 = 0.21170345824450282767155149946E+01, d410 = -0.87139158377797299206789907490E+00,
                 d411 = 0.22404374302607882758541771650E+01, d412 = 0.63157877876946881815570249290E+00,
                 d413 = -0.88990336451333310820698117400E-01, d414 = 0.18148505520854727256656404962E+02,
                 d415 = -0.91946323924783554000451984436E+01, d416 = -0.44360363875948939664310572000E+01;
constexpr double d51 = 0.10427508642579134603413151009E+02, d56 = 0.24228349177525818288430175319E+03,
                 d57 = 0.16520045171727028198505394887E+03, d58 = -0.37454675472269020279518312152E+03,
                 d59 = -0.22113666853125306036270938578E+02, d510 = 0.77334326684722638389603898808E+01,
                 d511 = -0.30674084731089398182061213626E+02, d512 = -0.93321305264302278729567221706E+01,
                 d513 = 0.15697238121770843886131091075E+02, d514 = -0.31139403219565177677282850411E+02,
                 d515 = -0.93529243588444783865713862664E+01, d516 = 0.35816841486394083752465898540E+02;
constexpr double d61 = 0.19985053242002433820987653617E+02, d66 = -0.38703730874935176555105901742E+03,
                 d67 = -0.18917813819516756882830838328E+03, d68 = 0.52780815920542364900561016686E+03,
                 d69 = -0.11573902539959630126141871134E+02, d610 = 0.68812326946963000169666922661E+01,
                 d611 = -0.10006050966910838403183860980E+01, d612 = 0.77771377980534432092869265740E+00,
                 d613 = -0.27782057523535084065932004339E+01, d614 = -0.60196695231264120758267380846E+02,
                 d615 = 0.84320405506677161018159903784E+02, d616 = 0.11992291136182789328035130030E+02;
constexpr double d71 = -0.25693933462703749003312586129E+02, d76 = -0.15418974869023643374053993627E+03,
                 d77 = -0.23152937917604549567536039109E+03, d78 = 0.35763911791061412378285349910E+03,
                 d79 = 0.93405324183624310003907691704E+02, d710 = -0.37458323136451633156875139351E+02,
                 d711 = 0.10409964950896230045147246184E+03, d712 = 0.29840293426660503123344363579E+02,
                 d713 = -0.43533456590011143754432175058E+02, d714 = 0.96324553959188282948394950600E+02,
                 d715 = -0.39177261675615439165231486172E+02, d716 = -0.14972683625798562581422125276E+03;
}  // namespace dop853_coef

template <std::size_t N>
void Dop853<N>::step12() {
  using namespace dop853_coef;
  const double h = h_;
  auto comb = [&](auto&& fn) {
    for (std::size_t i = 0; i < N; ++i) tmp_[i] = y_[i] + h * fn(i);
  };
  comb([&](std::size_t i) { return a21 * k1_[i]; });
  f_(t_ + c2 * h, tmp_, k2_);
  comb([&](std::size_t i) { return a31 * k1_[i] + a32 * k2_[i]; });
  f_(t_ + c3 * h, tmp_, k3_);
  comb([&](std::size_t i) { return a41 * k1_[i] + a43 * k3_[i]; });
  f_(t_ + c4 * h, tmp_, k4_);
  comb([&](std::size_t i) { return a51 * k1_[i] + a53 * k3_[i] + a54 * k4_[i]; });
  f_(t_ + c5 * h, tmp_, k5_);
  comb([&](std::size_t i) { return a61 * k1_[i] + a64 * k4_[i] + a65 * k5_[i]; });
  f_(t_ + c6 * h, tmp_, k6_);
  comb([&](std::size_t i) { return a71 * k1_[i] + a74 * k4_[i] + a75 * k5_[i] + a76 * k6_[i]; });
  f_(t_ + c7 * h, tmp_, k7_);
  comb([&](std::size_t i) {
    return a81 * k1_[i] + a84 * k4_[i] + a85 * k5_[i] + a86 * k6_[i] + a87 * k7_[i];
  });
  f_(t_ + c8 * h, tmp_, k8_);
  comb([&](std::size_t i) {
    return a91 * k1_[i] + a94 * k4_[i] + a95 * k5_[i] + a96 * k6_[i] + a97 * k7_[i] + a98 * k8_[i];
  });
  f_(t_ + c9 * h, tmp_, k9_);
  comb([&](std::size_t i) {
    return a101 * k1_[i] + a104 * k4_[i] + a105 * k5_[i] + a106 * k6_[i] + a107 * k7_[i] +
           a108 * k8_[i] + a109 * k9_[i];
  });
  f_(t_ + c10 * h, tmp_, k10_);
  comb([&](std::size_t i) {
    return a111 * k1_[i] + a114 * k4_[i] + a115 * k5_[i] + a116 * k6_[i] + a117 * k7_[i] +
           a118 * k8_[i] + a119 * k9_[i] + a1110 * k10_[i];
  });
  f_(t_ + c11 * h, tmp_, k2_);
  comb([&](std::size_t i) {
    return a121 * k1_[i] + a124 * k4_[i] + a125 * k5_[i] + a126 * k6_[i] + a127 * k7_[i] +
           a128 * k8_[i] + a129 * k9_[i] + a1210 * k10_[i] + a1211 * k2_[i];
  });
  f_(t_ + h, tmp_, k3_);
  for (std::size_t i = 0; i < N; ++i) {
    k4_[i] = b1 * k1_[i] + b6 * k6_[i] + b7 * k7_[i] + b8 * k8_[i] + b9 * k9_[i] + b10 * k10_[i] +
             b11 * k2_[i] + b12 * k3_[i];
    ynew_[i] = y_[i] + h * k4_[i];
  }
}

template <std::size_t N>
double Dop853<N>::error_estimate() const {
  using namespace dop853_coef;
  double err = 0.0, err2 = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double sk = 1.0 / (cfg_.atol + cfg_.rtol * std::max(std::abs(y_[i]), std::abs(ynew_[i])));
    double e2 = (k4_[i] - bhh1 * k1_[i] - bhh2 * k9_[i] - bhh3 * k3_[i]) * sk;
    err2 += e2 * e2;
    double e = (er1 * k1_[i] + er6 * k6_[i] + er7 * k7_[i] + er8 * k8_[i] + er9 * k9_[i] +
                er10 * k10_[i] + er11 * k2_[i] + er12 * k3_[i]) *
               sk;
    err += e * e;
  }
  double deno = err + 0.01 * err2;
  if (deno <= 0.0) deno = 1.0;
  return std::abs(h_) * err * std::sqrt(1.0 / (deno * N));
}

template <std::size_t N>
double Dop853<N>::initial_step(double hmax, double dir) {
  double dnf = 0, dny = 0;
  for (std::size_t i = 0; i < N; ++i) {
    const double sk = cfg_.atol + cfg_.rtol * std::abs(y_[i]);
    dnf += (k1_[i] / sk) * (k1_[i] / sk);
    dny += (y_[i] / sk) * (y_[i] / sk);
  }
  double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : std::sqrt(dny / dnf) * 0.01;
  h = std::min(h, hmax) * dir;
  for (std::size_t i = 0; i < N; ++i) tmp_[i] = y_[i] + h * k1_[i];
  f_(t_ + h, tmp_, k2_);
  double der2 = 0;
  for (std::size_t i = 0; i < N; ++i) {
    const double sk = cfg_.atol + cfg_.rtol * std::abs(y_[i]);
    const double d = (k2_[i] - k1_[i]) / sk;
    der2 += d * d;
  }
  der2 = std::sqrt(der2) / std::abs(h);
  const double der12 = std::max(std::abs(der2), std::sqrt(dnf));
  double h1 = der12 <= 1e-15 ? std::max(1e-6, std::abs(h) * 1e-3) : std::pow(0.01 / der12, 0.125);
  if (!std::isfinite(h1)) h1 = 1e-6;
  return std::min({100.0 * std::abs(h), h1, hmax}) * dir;
}

template <std::size_t N>
void Dop853<N>::prepare_dense() {
  if (dense_ready_) return;
  using namespace dop853_coef;
  // Uses the stages of the accepted step; k4_ holds f(t_new, y_new) at this
  // point and k10_, k2_, k3_ are recomputed for the three extra stages.
  const double h = hold_;
  const State& fnew = k4_;
  for (std::size_t i = 0; i < N; ++i) {
    rc_[0][i] = yold_[i];
    const double ydiff = ynew_[i] - yold_[i];
    rc_[1][i] = ydiff;
    const double bspl = h * k1old_[i] - ydiff;
    rc_[2][i] = bspl;
    rc_[3][i] = ydiff - h * fnew[i] - bspl;
    rc_[4][i] = d41 * k1old_[i] + d46 * k6_[i] + d47 * k7_[i] + d48 * k8_[i] + d49 * k9_[i] +
                d410 * k10_[i] + d411 * k2_[i] + d412 * k3_[i];
    rc_[5][i] = d51 * k1old_[i] + d56 * k6_[i] + d57 * k7_[i] + d58 * k8_[i] + d59 * k9_[i] +
                d510 * k10_[i] + d511 * k2_[i] + d512 * k3_[i];
    rc_[6][i] = d61 * k1old_[i] + d66 * k6_[i] + d67 * k7_[i] + d68 * k8_[i] + d69 * k9_[i] +
                d610 * k10_[i] + d611 * k2_[i] + d612 * k3_[i];
    rc_[7][i] = d71 * k1old_[i] + d76 * k6_[i] + d77 * k7_[i] + d78 * k8_[i] + d79 * k9_[i] +
                d710 * k10_[i] + d711 * k2_[i] + d712 * k3_[i];
  }
  State s14, s15, s16, kk;
  for (std::size_t i = 0; i < N; ++i)
    kk[i] = yold_[i] + h * (a141 * k1old_[i] + a147 * k7_[i] + a148 * k8_[i] + a149 * k9_[i] +
                            a1410 * k10_[i] + a1411 * k2_[i] + a1412 * k3_[i] + a1413 * fnew[i]);
  f_(told_ + c14 * h, kk, s14);
  for (std::size_t i = 0; i < N; ++i)
    kk[i] = yold_[i] + h * (a151 * k1old_[i] + a156 * k6_[i] + a157 * k7_[i] + a158 * k8_[i] +
                            a1511 * k2_[i] + a1512 * k3_[i] + a1513 * fnew[i] + a1514 * s14[i]);
  f_(told_ + c15 * h, kk, s15);
  for (std::size_t i = 0; i < N; ++i)
    kk[i] = yold_[i] + h * (a161 * k1old_[i] + a166 * k6_[i] + a167 * k7_[i] + a168 * k8_[i] +
                            a169 * k9_[i] + a1613 * fnew[i] + a1614 * s14[i] + a1615 * s15[i]);
  f_(told_ + c16 * h, kk, s16);
  for (std::size_t i = 0; i < N; ++i) {
    rc_[4][i] = h * (rc_[4][i] + d413 * fnew[i] + d414 * s14[i] + d415 * s15[i] + d416 * s16[i]);
    rc_[5][i] = h * (rc_[5][i] + d513 * fnew[i] + d514 * s14[i] + d515 * s15[i] + d516 * s16[i]);
    rc_[6][i] = h * (rc_[6][i] + d613 * fnew[i] + d614 * s14[i] + d615 * s15[i] + d616 * s16[i]);
    rc_[7][i] = h * (rc_[7][i] + d713 * fnew[i] + d714 * s14[i] + d715 * s15[i] + d716 * s16[i]);
  }
  dense_ready_ = true;
}

template <std::size_t N>
typename Dop853<N>::Result Dop853<N>::solve(double t0, const State& y0, double t_end,
                                            const std::vector<Event>& events, const Observer& obs) {
  Result res;
  const double dir = t_end >= t0 ? 1.0 : -1.0;
  const double hmax = std::min(std::abs(t_end - t0), cfg_.max_step);
  const double uround = 2.3e-16, safe = 0.9, fac1 = 1.0 / 3.0, fac2 = 6.0, expo1 = 1.0 / 8.0;
  const double graze_level = std::sqrt(cfg_.event_tol);
  t_ = t0;
  y_ = y0;
  res.t = t0;
  res.y = y0;
  if (t_end == t0) return res;
  f_(t_, y_, k1_);

  // Event bookkeeping.  An event whose residual starts within event_tol of
  // zero is disarmed until it has moved away, so that a start on the
  // section is not reported as a crossing.  A directional event is also
  // armed once the residual moves to the side opposite its direction.
  const std::size_t ne = events.size();
  std::vector<double> g_prev(ne), g_prev2(ne);
  std::vector<double> g_start(ne);
  std::vector<bool> armed(ne);
  for (std::size_t e = 0; e < ne; ++e) {
    g_prev[e] = g_start[e] = events[e].g(t_, y_);
    g_prev2[e] = std::numeric_limits<double>::quiet_NaN();
    armed[e] = std::abs(g_prev[e]) > cfg_.event_tol;
  }

  h_ = initial_step(hmax, dir);
  // A directional event starting on its section and leaving it against its
  // direction is armed at once; its return may happen inside the first step.
  std::vector<bool> dip_start(ne, false);
  for (std::size_t e = 0; e < ne; ++e) {
    const auto& ev = events[e];
    if (armed[e] || ev.direction == 0) continue;
    const double dt = 1e-3 * h_;
    State yp;
    for (std::size_t i = 0; i < N; ++i) yp[i] = y_[i] + dt * k1_[i];
    if (ev.direction * (ev.g(t_ + dt, yp) - g_start[e]) < 0) armed[e] = dip_start[e] = true;
  }
  bool last = false, reject = false;
  long nstep = 0;
  while (true) {
    if (nstep > cfg_.max_steps) {
      res.status = OdeStatus::MaxSteps;
      break;
    }
    if (0.1 * std::abs(h_) <= std::abs(t_) * uround || h_ == 0.0) {
      res.status = OdeStatus::StepUnderflow;
      break;
    }
    if ((t_ + 1.01 * h_ - t_end) * dir > 0.0) {
      h_ = t_end - t_;
      last = true;
    }
    ++nstep;
    step12();
    double err = error_estimate();
    if (!std::isfinite(err)) {
      // A non-finite trial stage is a rejected step.
      h_ *= 0.2;
      reject = true;
      last = false;
      continue;
    }
    double fac11 = std::pow(err, expo1);
    double fac = std::max(1.0 / fac2, std::min(1.0 / fac1, fac11 / safe));
    double hnew = h_ / fac;
    if (err <= 1.0) {
      yold_ = y_;
      k1old_ = k1_;
      told_ = t_;
      hold_ = h_;
      const double tnew = t_ + h_;
      f_(tnew, ynew_, k4_);
      dense_ready_ = false;

      // Event scan on the accepted step.
      std::vector<std::pair<std::size_t, Hit>> found;
      for (std::size_t e = 0; e < ne; ++e) {
        const auto& ev = events[e];
        const double gn = ev.g(tnew, ynew_);
        const double go = g_prev[e];
        const bool was_armed = armed[e];
        const bool change = (go < 0 && gn >= 0) || (go > 0 && gn <= 0);
        // Scan sub-intervals of the dense output so that two crossings
        // inside one step are not missed.
        prepare_dense();
        bool hit = false;
        double ta = told_, ga = go;
        for (int j = 1; j <= kEventSubdivisions && !(hit && ev.terminal); ++j) {
          const double tb = j == kEventSubdivisions ? tnew : told_ + (tnew - told_) * j / kEventSubdivisions;
          const double gb = j == kEventSubdivisions ? gn : ev.g(tb, dense(tb));
          if (!armed[e]) {
            armed[e] = std::abs(gb) > cfg_.event_tol ||
                       (ev.direction != 0 && ev.direction * gb < 0 && ev.direction * gb < ev.direction * g_start[e]);
            ta = tb;
            ga = gb;
            continue;
          }
          if (dip_start[e]) {
            // Bracket the return from the far point of the dip.
            dip_start[e] = false;
            auto wrong = [&](double tt) { return ev.direction * ev.g(tt, dense(tt)); };
            const auto m = boost::math::tools::brent_find_minima(wrong, std::min(ta, tb), std::max(ta, tb), 40);
            if (m.second < 0 && ev.direction * gb > 0) {
              ta = m.first;
              ga = ev.direction * m.second;
            }
          }
          const bool ch = (ga < 0 && gb >= 0) || (ga > 0 && gb <= 0);
          const int d = gb > ga ? 1 : -1;
          if (ch && (ev.direction == 0 || ev.direction == d)) {
            double th = tb;
            if (gb != 0.0) {
              auto gfun = [&](double tt) { return ev.g(tt, dense(tt)); };
              boost::uintmax_t it = 200;
              auto tol = [](double u, double v) {
                return std::abs(u - v) <= 4e-16 * std::max(std::abs(u), std::abs(v)) + 1e-300;
              };
              auto r = tb > ta ? boost::math::tools::toms748_solve(gfun, ta, tb, ga, gb, tol, it)
                               : boost::math::tools::toms748_solve(gfun, tb, ta, gb, ga, tol, it);
              th = std::abs(gfun(r.first)) <= std::abs(gfun(r.second)) ? r.first : r.second;
            }
            found.push_back({e, Hit{th, dense(th), ev.id, d, false}});
            hit = true;
          }
          ta = tb;
          ga = gb;
        }
        if (!hit && was_armed && !change && std::isfinite(g_prev2[e]) && std::abs(go) < graze_level &&
            std::abs(go) < std::abs(g_prev2[e]) && std::abs(go) < std::abs(gn) &&
            ((go > 0) == (gn > 0))) {
          // Even-order touch of the section at the previous step end.
          found.push_back({e, Hit{told_, yold_, ev.id, 0, true}});
        }
        g_prev2[e] = go;
        g_prev[e] = gn;
      }
      std::stable_sort(found.begin(), found.end(), [dir](const auto& u, const auto& v) {
        return (u.second.t - v.second.t) * dir < 0;
      });
      bool stop = false;
      for (auto& [e, hit] : found) {
        res.hits.push_back(hit);
        if (events[e].terminal && !hit.graze) {
          res.status = OdeStatus::Event;
          res.stop_event = static_cast<int>(e);
          res.t = hit.t;
          res.y = hit.y;
          stop = true;
          break;
        }
      }
      if (obs) {
        prepare_dense();
        obs(*this, told_, stop ? res.t : tnew);
      }
      if (stop) {
        res.steps = nstep;
        return res;
      }
      k1_ = k4_;
      y_ = ynew_;
      t_ = tnew;
      bool finite = true;
      for (double v : y_) finite = finite && std::isfinite(v);
      if (!finite) {
        res.status = OdeStatus::NonFinite;
        break;
      }
      if (last) {
        res.status = OdeStatus::Completed;
        break;
      }
      if (std::abs(hnew) > hmax) hnew = dir * hmax;
      if (reject) hnew = dir * std::min(std::abs(hnew), std::abs(h_));
      reject = false;
    } else {
      hnew = h_ / std::min(1.0 / fac1, fac11 / safe);
      reject = true;
      last = false;
    }
    h_ = hnew;
  }
  res.t = t_;
  res.y = y_;
  res.steps = nstep;
  return res;
}

}  // namespace filreg
