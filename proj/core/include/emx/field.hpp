#pragma once

#include <complex>
#include <span>
#include <vector>

#include "emx/grid.hpp"

namespace emx {

/// Real periodic scalar field with synchronized physical and spectral views.
///
/// Spectral coefficients are normalized so the k=0 coefficient equals the
/// grid mean. Whichever view was written last is authoritative; the other is
/// regenerated on demand.
class ScalarField2D {
 public:
  explicit ScalarField2D(const FourierGrid& grid);

  const FourierGrid& grid() const { return grid_; }
  int n() const { return grid_.n(); }

  /// Read access, converting if necessary.
  std::span<const double> phys() const;
  std::span<const std::complex<double>> spec() const;

  /// Write access; invalidates the other view.
  std::span<double> phys_mut();
  std::span<std::complex<double>> spec_mut();

  double phys_at(int i, int j) const { return phys()[static_cast<std::size_t>(i) * n() + j]; }
  std::complex<double> spec_at(int row, int col) const {
    return spec()[static_cast<std::size_t>(row) * grid_.spec_cols() + col];
  }

  double mean() const;
  double max_abs() const;
  /// Grid-quadrature L2 norm, evaluated spectrally (Parseval).
  double l2_norm() const;

  void project_mean_zero();

  ScalarField2D& operator+=(const ScalarField2D& other);
  ScalarField2D& operator-=(const ScalarField2D& other);
  ScalarField2D& operator*=(double s);

  static ScalarField2D zero(const FourierGrid& grid) { return ScalarField2D(grid); }

 private:
  void ensure_phys() const;
  void ensure_spec() const;

  FourierGrid grid_;
  mutable std::vector<double> phys_;
  mutable std::vector<std::complex<double>> spec_;
  mutable bool phys_valid_ = true;
  mutable bool spec_valid_ = true;
};

ScalarField2D operator+(ScalarField2D a, const ScalarField2D& b);
ScalarField2D operator-(ScalarField2D a, const ScalarField2D& b);
ScalarField2D operator*(double s, ScalarField2D f);

/// Pair of scalar components (x1 and x2).
struct VectorField2D {
  ScalarField2D x1;
  ScalarField2D x2;
  bool divergence_free = false;

  explicit VectorField2D(const FourierGrid& grid) : x1(grid), x2(grid) {}
  VectorField2D(ScalarField2D c1, ScalarField2D c2, bool div_free = false)
      : x1(std::move(c1)), x2(std::move(c2)), divergence_free(div_free) {}

  const FourierGrid& grid() const { return x1.grid(); }
  double max_abs() const;
};

}  // namespace emx
