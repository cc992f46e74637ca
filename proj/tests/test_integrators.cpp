#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "emx/errors.hpp"
#include "emx/integrators.hpp"
#include "test_support.hpp"

using namespace emx;
using emx::test::from_function;
using emx::test::low_band;
using emx::test::max_diff;

namespace {

Mat2 mat2_mul(const Mat2& A, const Mat2& B) {
  return {A[0] * B[0] + A[1] * B[2], A[0] * B[1] + A[1] * B[3], A[2] * B[0] + A[3] * B[2],
          A[2] * B[1] + A[3] * B[3]};
}

// Independent 2x2 exponential: scaling and squaring with a long Taylor sum.
Mat2 mat2_exp_reference(Mat2 M) {
  double norm = 0.0;
  for (double v : M) norm = std::max(norm, std::abs(v));
  int s = 0;
  while (norm > 0.25) {
    norm /= 2.0;
    ++s;
  }
  const double scale = std::ldexp(1.0, -s);
  for (double& v : M) v *= scale;
  Mat2 result{1.0, 0.0, 0.0, 1.0};
  Mat2 term{1.0, 0.0, 0.0, 1.0};
  for (int n = 1; n <= 20; ++n) {
    term = mat2_mul(term, M);
    for (double& v : term) v /= n;
    for (int i = 0; i < 4; ++i) result[i] += term[i];
  }
  for (int i = 0; i < s; ++i) result = mat2_mul(result, result);
  return result;
}

Mat2 maxwell_generator(double c, double kk, double dt) {
  return {-c * c * dt, -c * kk * dt, c * dt, 0.0};
}

PerturbationState random_perturbation(const FourierGrid& g, std::uint64_t seed, double amp) {
  PerturbationState s(g);
  s.omega = amp * low_band(seed, g, 4);
  s.E = amp * low_band(seed + 1, g, 4);
  s.a = amp * low_band(seed + 2, g, 4);
  s.project_means();
  return s;
}

double state_diff(const PerturbationState& a, const PerturbationState& b) {
  return std::max({max_diff(a.omega, b.omega), max_diff(a.E, b.E), max_diff(a.a, b.a)});
}

double state_diff(const NormalState& a, const NormalState& b) {
  return std::max({max_diff(a.omega, b.omega), max_diff(a.E1, b.E1), max_diff(a.E2, b.E2),
                   max_diff(a.b3, b.b3)});
}

}  // namespace

TEST_CASE("scheme names and config validation") {
  CHECK(scheme_from_string("rk4") == Scheme::rk4);
  CHECK(scheme_from_string("ifrk4") == Scheme::ifrk4);
  CHECK_THROWS_AS(scheme_from_string("euler"), ConfigError);
  CHECK(std::string(to_string(Scheme::ifrk4)) == "ifrk4");

  StepperConfig c;
  c.validate();
  c.cfl = 1.5;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.cfl = 0.5;
  c.t_end = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("maxwell mode exponential matches reference exponential") {
  struct Case {
    double c, kk, dt;
  };
  // c = 2, kk = 1 sits exactly on the confluent branch (disc = 0).
  for (Case q : {Case{1.0, 0.0, 0.3}, Case{2.0, 1.0, 0.2}, Case{10.0, 100.0, 0.01},
                 Case{0.3, 7.0, 0.05}, Case{1.0, 9.0, 0.5}, Case{2.0, 1.0000001, 0.2}}) {
    Mat2 got = maxwell_mode_exponential(q.c, q.kk, q.dt);
    Mat2 want = mat2_exp_reference(maxwell_generator(q.c, q.kk, q.dt));
    for (int i = 0; i < 4; ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-11));
  }
}

TEST_CASE("mode exponential semigroup property") {
  const double c = 1.7, kk = 5.0;
  Mat2 a = maxwell_mode_exponential(c, kk, 0.13);
  Mat2 b = maxwell_mode_exponential(c, kk, 0.07);
  Mat2 ab = mat2_mul(a, b);
  Mat2 want = maxwell_mode_exponential(c, kk, 0.20);
  for (int i = 0; i < 4; ++i) CHECK(ab[i] == doctest::Approx(want[i]).epsilon(1e-12));
}

TEST_CASE("stable_dt bounds") {
  FourierGrid g(64);
  VectorField2D u(g);
  u.x1 = from_function(g, [](double x, double) { return 2.0 * std::cos(x); });
  StepperConfig cfg;
  cfg.cfl = 0.5;
  Params p;
  p.c = 1.0;
  // Advective bound h/||u|| = (2pi/64)/2 > dt_cap, so the cap wins.
  CHECK(stable_dt(u, p, cfg, Scheme::ifrk4) == doctest::Approx(0.5 * cfg.dt_cap));
  // Stiff rk4 damping bound 2.8/c^2 with c = 100 dominates.
  p.c = 100.0;
  CHECK(stable_dt(u, p, cfg, Scheme::rk4) == doctest::Approx(0.5 * 2.8 / 1e4));
  CHECK(stable_dt(u, p, cfg, Scheme::ifrk4) == doctest::Approx(0.5 * cfg.dt_cap));
}

TEST_CASE("ifrk4 is exact on a pure maxwell mode") {
  // omega = 0 and x2-only fields make the nonlinearity vanish identically,
  // so the step must reproduce the exact 2x2 mode flow.
  FourierGrid g(64);
  Params p;
  p.c = 1.2;
  StepperConfig cfg;
  cfg.scheme = Scheme::ifrk4;
  PerturbationStepper stepper(g, p, cfg);
  PerturbationState s(g);
  s.E = from_function(g, [](double, double y) { return std::cos(3.0 * y); });
  s.a = from_function(g, [](double, double y) { return 0.5 * std::cos(3.0 * y); });

  const double dt = 0.05;
  for (int i = 0; i < 10; ++i) stepper.step(s, i * dt, dt);

  Mat2 flow = mat2_exp_reference(maxwell_generator(p.c, 9.0, 0.5));
  PerturbationState want(g);
  want.E = from_function(g, [&](double, double y) {
    return (flow[0] * 1.0 + flow[1] * 0.5) * std::cos(3.0 * y);
  });
  want.a = from_function(g, [&](double, double y) {
    return (flow[2] * 1.0 + flow[3] * 0.5) * std::cos(3.0 * y);
  });
  CHECK(s.omega.max_abs() < 1e-12);
  CHECK(max_diff(s.E, want.E) < 1e-11);
  CHECK(max_diff(s.a, want.a) < 1e-11);
}

TEST_CASE("perturbation stepper fourth-order convergence") {
  FourierGrid g(48);
  Params p;
  for (Scheme scheme : {Scheme::ifrk4, Scheme::rk4}) {
    StepperConfig cfg;
    cfg.scheme = scheme;
    PerturbationStepper stepper(g, p, cfg);
    const double T = 0.2;

    auto run = [&](int steps) {
      PerturbationState s = random_perturbation(g, 500, 0.2);
      const double dt = T / steps;
      for (int i = 0; i < steps; ++i) stepper.step(s, i * dt, dt);
      return s;
    };
    PerturbationState ref = run(160);
    double e10 = state_diff(run(10), ref);
    double e20 = state_diff(run(20), ref);
    double e40 = state_diff(run(40), ref);
    CHECK(std::log2(e10 / e20) > 3.8);
    CHECK(std::log2(e20 / e40) > 3.8);
  }
}

TEST_CASE("ifrk4 and rk4 agree at fine dt and dissipate energy") {
  FourierGrid g(48);
  Params p;
  StepperConfig cfg;
  PerturbationState a = random_perturbation(g, 900, 0.3);
  PerturbationState b = a;
  const double e0 = a.energy_l2();
  PerturbationStepper sif(g, p, cfg), srk(g, p, cfg);
  const double dt = 1e-3;
  for (int i = 0; i < 100; ++i) {
    sif.step(a, i * dt, dt);
    StepperConfig c2 = cfg;
    c2.scheme = Scheme::rk4;
    PerturbationStepper s2(g, p, c2);
    s2.step(b, i * dt, dt);
  }
  CHECK(state_diff(a, b) < 1e-8);
  CHECK(a.energy_l2() <= e0 * (1.0 + 1e-9));
}

TEST_CASE("euler-riesz stepper is exact on transport-free modes") {
  FourierGrid g(64);
  StepperConfig cfg;
  ScalarField2D w0 = from_function(g, [](double x, double) { return std::cos(5.0 * x); });

  Params p;  // alpha=1, beta=0: symbol -1 on this mode
  EulerRieszStepper st(g, p, cfg);
  ScalarField2D w = w0;
  const double dt = 0.05;
  for (int i = 0; i < 10; ++i) st.step(w, i * dt, dt);
  CHECK(max_diff(w, std::exp(-0.5) * w0) < 1e-12);

  Params p2;  // alpha=0, beta=1: symbol 1 - 1 = 0, the mode is frozen
  p2.alpha = 0.0;
  p2.beta = 1.0;
  EulerRieszStepper st2(g, p2, cfg);
  ScalarField2D w2 = w0;
  for (int i = 0; i < 10; ++i) st2.step(w2, i * dt, dt);
  CHECK(max_diff(w2, w0) < 1e-12);
}

TEST_CASE("euler-riesz stepper fourth-order convergence") {
  FourierGrid g(48);
  Params p;
  for (Scheme scheme : {Scheme::ifrk4, Scheme::rk4}) {
    StepperConfig cfg;
    cfg.scheme = scheme;
    EulerRieszStepper st(g, p, cfg);
    const double T = 0.2;
    auto run = [&](int steps) {
      ScalarField2D w = 0.5 * low_band(42, g, 4);
      w.project_mean_zero();
      const double dt = T / steps;
      for (int i = 0; i < steps; ++i) st.step(w, i * dt, dt);
      return w;
    };
    ScalarField2D ref = run(160);
    double e10 = max_diff(run(10), ref);
    double e20 = max_diff(run(20), ref);
    double e40 = max_diff(run(40), ref);
    CHECK(std::log2(e10 / e20) > 3.8);
    CHECK(std::log2(e20 / e40) > 3.8);
  }
}

TEST_CASE("normal stepper fourth-order convergence and scheme agreement") {
  FourierGrid g(48);
  Params p;
  p.c = 1.0;
  auto initial = [&]() {
    NormalState s(g);
    s.omega = 0.3 * low_band(60, g, 4);
    s.E1 = 0.3 * low_band(61, g, 4);
    s.E2 = 0.3 * low_band(62, g, 4);
    s.b3 = 0.3 * low_band(63, g, 4);
    s.omega.project_mean_zero();
    return s;
  };
  const double T = 0.2;
  auto run = [&](Scheme scheme, int steps) {
    StepperConfig cfg;
    cfg.scheme = scheme;
    NormalStepper st(g, p, cfg);
    NormalState s = initial();
    const double dt = T / steps;
    for (int i = 0; i < steps; ++i) st.step(s, i * dt, dt);
    return s;
  };
  NormalState ref = run(Scheme::ifrk4, 320);
  double e10 = state_diff(run(Scheme::ifrk4, 10), ref);
  double e20 = state_diff(run(Scheme::ifrk4, 20), ref);
  double e40 = state_diff(run(Scheme::ifrk4, 40), ref);
  CHECK(std::log2(e10 / e20) > 3.7);
  CHECK(std::log2(e20 / e40) > 3.7);
  CHECK(state_diff(run(Scheme::rk4, 160), ref) < 1e-7);
}

TEST_CASE("blowup guard raises") {
  FourierGrid g(48);
  Params p;
  StepperConfig cfg;
  cfg.blowup_guard = 0.1;
  EulerRieszStepper st(g, p, cfg);
  ScalarField2D w = from_function(g, [](double x, double) { return std::cos(5.0 * x); });
  CHECK_THROWS_AS(st.step(w, 0.0, 0.05), BlowupDetected);
}
