#include <cmath>
#include <numbers>

#include "doctest.h"
#include "emx/besov.hpp"
#include "emx/spectral.hpp"
#include "test_support.hpp"

using namespace emx;
using emx::test::from_function;
using emx::test::max_diff;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Radial profile of the partition, restated independently of the library.
double chi(double r) {
  if (r <= 1.0) return 1.0;
  if (r >= 2.0) return 0.0;
  double c = std::cos(0.5 * std::numbers::pi * (r - 1.0));
  return c * c;
}

double phi(int j, double k) {
  if (j == -1) return chi(2.0 * k);
  return chi(std::ldexp(k, -j)) - chi(std::ldexp(k, 1 - j));
}

}  // namespace

TEST_CASE("partition of unity is exact") {
  FourierGrid g(64);
  DyadicPartition lp(g);
  CHECK(lp.j_max() == 5);

  ScalarField2D f = emx::test::random_band_limited(7, g);
  ScalarField2D sum(g);
  for (int j = lp.j_min(); j <= lp.j_max(); ++j) sum += lp.block(f, j);
  CHECK(max_diff(sum, f) < 1e-12);

  // Weights below the top block match the reference profile; the top block
  // absorbs the telescoping remainder so everything sums to one.
  for (double k : {0.0, 0.7, 1.0, 1.9, 3.0, 5.5, 8.0, 13.0, 20.0, 45.0}) {
    double s = 0.0;
    for (int j = lp.j_min(); j <= lp.j_max(); ++j) {
      if (j < lp.j_max()) CHECK(lp.weight(j, k) == doctest::Approx(phi(j, k)).epsilon(1e-14));
      s += lp.weight(j, k);
    }
    CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("single mode lands in one block") {
  FourierGrid g(64);
  DyadicPartition lp(g);
  // |k| = 8: chi(8/8) = 1, chi(8/4) = 0, so phi_3(8) = 1 and all others vanish.
  ScalarField2D f = from_function(g, [](double x, double) { return std::cos(8.0 * x); });
  CHECK(max_diff(lp.block(f, 3), f) < 1e-13);
  for (int j : {-1, 0, 1, 2, 4, 5}) CHECK(lp.block(f, j).max_abs() < 1e-13);
}

TEST_CASE("lebesgue norms") {
  FourierGrid g(64);
  ScalarField2D f = from_function(g, [](double x, double) { return std::cos(x); });
  double l2 = std::sqrt(0.5) * kTwoPi;
  CHECK(lebesgue_norm(f, 2.0) == doctest::Approx(l2).epsilon(1e-12));
  CHECK(lebesgue_norm(f, BesovSpec::infinity()) == doctest::Approx(1.0).epsilon(1e-12));
  // int cos^4 over the torus = (3/8)(2 pi)^2.
  double l4 = std::pow(0.375 * kTwoPi * kTwoPi, 0.25);
  CHECK(lebesgue_norm(f, 4.0) == doctest::Approx(l4).epsilon(1e-12));
}

TEST_CASE("besov norm against analytic block weights") {
  FourierGrid g(64);
  // |k| = 3 splits between j = 1 and j = 2 with weight 1/2 each.
  CHECK(phi(1, 3.0) == doctest::Approx(0.5));
  CHECK(phi(2, 3.0) == doctest::Approx(0.5));
  ScalarField2D f = from_function(g, [](double, double y) { return std::cos(3.0 * y); });
  double l2 = std::sqrt(0.5) * kTwoPi;
  for (double s : {0.0, 1.0, 2.0}) {
    BesovSpec spec{s, 2.0, 1.0};
    double expect = 0.5 * l2 * (std::pow(2.0, s) + std::pow(2.0, 2.0 * s));
    CHECK(besov_norm(f, spec) == doctest::Approx(expect).epsilon(1e-12));
  }

  // Pure block at j = 3: the norm is 2^{3s} times the L^p norm, any p, q.
  ScalarField2D h = from_function(g, [](double x, double) { return std::cos(8.0 * x); });
  CHECK(besov_norm(h, BesovSpec::B121()) == doctest::Approx(8.0 * l2).epsilon(1e-12));
  CHECK(besov_norm(h, BesovSpec::B221()) == doctest::Approx(64.0 * l2).epsilon(1e-12));
  CHECK(besov_norm(h, BesovSpec::B0inf1()) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(besov_norm(h, BesovSpec{2.0, 2.0, BesovSpec::infinity()}) ==
        doctest::Approx(64.0 * l2).epsilon(1e-12));
}

TEST_CASE("vector besov norm is blockwise l2 across components") {
  FourierGrid g(64);
  ScalarField2D f = emx::test::random_band_limited(11, g);
  ScalarField2D z(g);
  BesovSpec spec = BesovSpec::B121();
  double nf = besov_norm(f, spec);
  CHECK(besov_norm({&f, &z}, spec) == doctest::Approx(nf).epsilon(1e-12));
  CHECK(besov_norm({&f, &f}, spec) == doctest::Approx(std::sqrt(2.0) * nf).epsilon(1e-12));
}

TEST_CASE("lipschitz seminorm") {
  FourierGrid g(64);
  VectorField2D v(g);
  v.x1 = from_function(g, [](double, double y) { return std::sin(y); });
  CHECK(lipschitz_seminorm(v) == doctest::Approx(1.0).epsilon(1e-10));
  v.x2 = from_function(g, [](double x, double) { return 3.0 * std::sin(x); });
  CHECK(lipschitz_seminorm(v) == doctest::Approx(3.0).epsilon(1e-10));
}
