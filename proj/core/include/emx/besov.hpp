#pragma once

#include <limits>
#include <vector>

#include "emx/field.hpp"

namespace emx {

/// Indices of the Besov space B^s_{p,q}. p,q = infinity() for the sup cases.
struct BesovSpec {
  double s = 0.0;
  double p = 2.0;
  double q = 1.0;

  static constexpr double infinity() { return std::numeric_limits<double>::infinity(); }

  static BesovSpec B121() { return {1.0, 2.0, 1.0}; }
  static BesovSpec B221() { return {2.0, 2.0, 1.0} ; }
  static BesovSpec B0inf1() { return {0.0, infinity(), 1.0}; }
};

/// Smooth dyadic Littlewood-Paley partition on a grid.
///
/// Blocks j = -1 .. j_max use a raised-cosine radial profile with exact
/// telescoping: phi_{-1} is the low-pass below |k| ~ 1 and the top block
/// absorbs the remainder so the partition of unity is exact on every mode.
class DyadicPartition {
 public:
  explicit DyadicPartition(const FourierGrid& grid);

  int j_min() const { return -1; }
  int j_max() const { return j_max_; }

  /// Weight phi_j(|k|).
  double weight(int j, double kmag) const;

  ScalarField2D block(const ScalarField2D& f, int j) const;

  /// Stable identifier of the radial profile, recorded with every run.
  static const char* profile_id() { return "raised-cosine-telescoping-v1"; }

 private:
  FourierGrid grid_;
  int j_max_;
};

ScalarField2D dyadic_block(const ScalarField2D& f, int j);

/// (sum |f|^p h^2)^{1/p}; p = inf gives max|f|.
double lebesgue_norm(const ScalarField2D& f, double p);

double besov_norm(const ScalarField2D& f, const BesovSpec& spec);

/// Joint norm of several components: block-wise l2 across components.
double besov_norm(const std::vector<const ScalarField2D*>& comps, const BesovSpec& spec);

/// max over the grid of the entrywise max of the Jacobian (spectral derivatives).
double lipschitz_seminorm(const VectorField2D& v);

}  // namespace emx
