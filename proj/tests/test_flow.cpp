#include <cmath>
#include <random>

#include "doctest.h"
#include "emx/errors.hpp"
#include "emx/flow.hpp"
#include "emx/spectral.hpp"
#include "test_support.hpp"

using namespace emx;
using emx::test::from_function;
using emx::test::low_band;
using emx::test::max_diff;

namespace {

VectorField2D shear(const FourierGrid& g, double amp = 1.0) {
  VectorField2D u(g);
  u.x1 = from_function(g, [amp](double, double y) { return amp * std::sin(y); });
  u.divergence_free = true;
  return u;
}

FlowMap shear_flow(const FourierGrid& g, double t, int steps = 5) {
  FlowMap fm(g);
  VectorField2D u = shear(g);
  const double dt = t / steps;
  for (int i = 0; i < steps; ++i) fm = advance_flow(fm, u, dt);
  return fm;
}

}  // namespace

TEST_CASE("spline reproduces samples and converges at fourth order") {
  FourierGrid g(64);
  ScalarField2D f = emx::test::random_band_limited(3, g);
  PeriodicSpline2D sp(f);
  auto p = f.phys();
  for (int i : {0, 7, 33, 63})
    for (int j : {0, 11, 42})
      CHECK(sp.eval(g.x(i), g.x(j)) ==
            doctest::Approx(p[static_cast<std::size_t>(i) * g.n() + j]).epsilon(1e-12));

  auto worst = [](int n) {
    FourierGrid gg(n);
    ScalarField2D s = from_function(gg, [](double x, double y) { return std::sin(x) * std::cos(y); });
    PeriodicSpline2D spl(s);
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> U(0.0, 2.0 * std::numbers::pi);
    double w = 0.0;
    for (int q = 0; q < 200; ++q) {
      double x = U(rng), y = U(rng);
      w = std::max(w, std::abs(spl.eval(x, y) - std::sin(x) * std::cos(y)));
    }
    return w;
  };
  double e64 = worst(64), e128 = worst(128);
  CHECK(e128 < 1e-7);
  CHECK(e64 / e128 > 12.0);
}

TEST_CASE("fresh flow map is the identity") {
  FourierGrid g(64);
  FlowMap fm(g);
  CHECK(fm.is_identity());
  CHECK(fm.roundtrip_deviation() < 1e-13);
  CHECK(fm.volume_deviation() < 1e-13);
}

TEST_CASE("steady shear flow is integrated exactly") {
  FourierGrid g(128);
  const double t = 0.5;
  FlowMap fm = shear_flow(g, t);
  CHECK(fm.t == doctest::Approx(t));

  ScalarField2D want_plus = from_function(g, [t](double, double y) { return t * std::sin(y); });
  CHECK(max_diff(fm.d_plus.x1, want_plus) < 1e-11);
  CHECK(fm.d_plus.x2.max_abs() < 1e-12);
  CHECK(max_diff(fm.d_minus.x1, -1.0 * want_plus) < 1e-10);
  CHECK(fm.d_minus.x2.max_abs() < 1e-12);

  CHECK(fm.roundtrip_deviation() < 1e-9);
  CHECK(fm.volume_deviation() < 1e-10);
  CHECK(displacement_seminorm(fm.d_plus) == doctest::Approx(t).epsilon(1e-6));
  CHECK(full_map_seminorm(fm.d_plus) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("time-dependent shear uses all three velocity samples") {
  FourierGrid g(64);
  FlowMap fm(g);
  const double T = 0.4;
  const int steps = 4;
  const double dt = T / steps;
  // u(t) = t (sin x2, 0): displacement t^2/2 sin x2, reproduced exactly by the
  // RK4 time quadrature for this linear-in-time field.
  for (int i = 0; i < steps; ++i) {
    double t0 = i * dt;
    fm = advance_flow(fm, shear(g, t0), shear(g, t0 + dt / 2.0), shear(g, t0 + dt), dt);
  }
  ScalarField2D want =
      from_function(g, [T](double, double y) { return 0.5 * T * T * std::sin(y); });
  CHECK(max_diff(fm.d_plus.x1, want) < 1e-10);
  CHECK(max_diff(fm.d_minus.x1, -1.0 * want) < 1e-9);
}

TEST_CASE("compose against the analytic shear answer") {
  FourierGrid g(128);
  const double t = 0.3;
  FlowMap fm = shear_flow(g, t);
  ScalarField2D f = from_function(g, [](double x, double) { return std::sin(x); });
  ScalarField2D fwd = compose(f, fm, FlowDirection::forward);
  ScalarField2D want =
      from_function(g, [t](double x, double y) { return std::sin(x + t * std::sin(y)); });
  CHECK(max_diff(fwd, want) < 1e-7);
  ScalarField2D back = compose(f, fm, FlowDirection::backward);
  ScalarField2D want_b =
      from_function(g, [t](double x, double y) { return std::sin(x - t * std::sin(y)); });
  CHECK(max_diff(back, want_b) < 1e-7);
}

TEST_CASE("riesz commutator vanishes linearly as the flow shrinks") {
  FourierGrid g(128);
  ScalarField2D w = low_band(5, g, 6);
  w.project_mean_zero();
  double n1 = riesz_commutator(w, shear_flow(g, 0.1)).max_abs();
  double n2 = riesz_commutator(w, shear_flow(g, 0.05)).max_abs();
  double n3 = riesz_commutator(w, shear_flow(g, 0.025)).max_abs();
  CHECK(n1 / n2 == doctest::Approx(2.0).epsilon(0.2));
  CHECK(n2 / n3 == doctest::Approx(2.0).epsilon(0.2));
}

TEST_CASE("commutator ratio is finite and stable in t") {
  FourierGrid g(128);
  ScalarField2D w = low_band(9, g, 6);
  w.project_mean_zero();
  double r1 = commutator_ratio(w, shear_flow(g, 0.1), 2.0);
  double r2 = commutator_ratio(w, shear_flow(g, 0.05), 2.0);
  CHECK(r1 > 0.0);
  CHECK(std::isfinite(r1));
  CHECK(r1 / r2 > 0.5);
  CHECK(r1 / r2 < 2.0);

  FlowMap id(g);
  CHECK_THROWS_AS(commutator_ratio(w, id, 2.0), DegenerateFlowError);
}

TEST_CASE("vishik ratio") {
  FourierGrid g(128);
  ScalarField2D f = low_band(21, g, 6);
  FlowMap id(g);
  // Identity flow: numerator and denominator coincide.
  CHECK(vishik_ratio(f, id) == doctest::Approx(1.0).epsilon(1e-10));
  double r = vishik_ratio(f, shear_flow(g, 0.3));
  CHECK(r > 0.0);
  CHECK(std::isfinite(r));
  CHECK(r < 10.0);
}
