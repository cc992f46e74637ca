#include "emx/besov.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "emx/errors.hpp"
#include "emx/spectral.hpp"

namespace emx {
namespace {

// chi(r): 1 for r <= 1, 0 for r >= 2, raised cosine in between.
double chi(double r) {
  if (r <= 1.0) return 1.0;
  if (r >= 2.0) return 0.0;
  const double c = std::cos(0.5 * std::numbers::pi * (r - 1.0));
  return c * c;
}

}  // namespace

DyadicPartition::DyadicPartition(const FourierGrid& grid) : grid_(grid) {
  const double kmax = std::numbers::sqrt2 * grid.nyquist();
  j_max_ = static_cast<int>(std::floor(std::log2(kmax)));
}

double DyadicPartition::weight(int j, double kmag) const {
  if (j < -1 || j > j_max_) throw OutOfRangeError("dyadic block index out of range");
  if (j == -1) return chi(2.0 * kmag);
  // phi_j = chi(2^{-j}|k|) - chi(2^{-j+1}|k|); top block takes the remainder.
  if (j == j_max_) return 1.0 - chi(std::ldexp(kmag, 1 - j_max_));
  return chi(std::ldexp(kmag, -j)) - chi(std::ldexp(kmag, 1 - j));
}

ScalarField2D DyadicPartition::block(const ScalarField2D& f, int j) const {
  if (j < -1 || j > j_max_) throw OutOfRangeError("dyadic block index out of range");
  return apply_multiplier(f, [this, j](int k1, int k2) -> std::complex<double> {
    return weight(j, std::hypot(double(k1), double(k2)));
  });
}

ScalarField2D dyadic_block(const ScalarField2D& f, int j) {
  return DyadicPartition(f.grid()).block(f, j);
}

double lebesgue_norm(const ScalarField2D& f, double p) {
  if (std::isinf(p)) return f.max_abs();
  if (p < 1.0) throw std::invalid_argument("lebesgue_norm: p must be >= 1");
  if (p == 2.0) return f.l2_norm();
  const double h2 = f.grid().h() * f.grid().h();
  double sum = 0.0;
  for (double v : f.phys()) sum += std::pow(std::abs(v), p);
  return std::pow(sum * h2, 1.0 / p);
}

double besov_norm(const ScalarField2D& f, const BesovSpec& spec) {
  return besov_norm(std::vector<const ScalarField2D*>{&f}, spec);
}

double besov_norm(const std::vector<const ScalarField2D*>& comps, const BesovSpec& spec) {
  if (comps.empty()) return 0.0;
  DyadicPartition part(comps.front()->grid());
  double acc = 0.0;
  for (int j = part.j_min(); j <= part.j_max(); ++j) {
    double block_norm_sq = 0.0;
    for (const ScalarField2D* c : comps) {
      const double bn = lebesgue_norm(part.block(*c, j), spec.p);
      block_norm_sq += bn * bn;
    }
    const double term = std::exp2(spec.s * j) * std::sqrt(block_norm_sq);
    if (std::isinf(spec.q))
      acc = std::max(acc, term);
    else if (spec.q == 1.0)
      acc += term;
    else
      acc += std::pow(term, spec.q);
  }
  if (std::isinf(spec.q) || spec.q == 1.0) return acc;
  return std::pow(acc, 1.0 / spec.q);
}

double lipschitz_seminorm(const VectorField2D& v) {
  double m = 0.0;
  for (const ScalarField2D* c : {&v.x1, &v.x2}) {
    for (int axis : {1, 2}) m = std::max(m, derivative(*c, axis).max_abs());
  }
  return m;
}

}  // namespace emx
