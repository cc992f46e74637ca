#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>

namespace emx {

/// Uniform periodic grid on [0,2pi)^2 with n points per axis.
///
/// Spectral layout is the real-to-complex half plane: modes are stored as
/// an n x (n/2+1) row-major array, row i carrying signed wavenumber
/// k1 = i (i <= n/2) or i - n, column j carrying k2 = j in [0, n/2].
class FourierGrid {
 public:
  explicit FourierGrid(int n);

  int n() const { return n_; }
  std::size_t size_phys() const { return static_cast<std::size_t>(n_) * n_; }
  std::size_t size_spec() const { return static_cast<std::size_t>(n_) * (n_ / 2 + 1); }
  int spec_cols() const { return n_ / 2 + 1; }

  double h() const { return 2.0 * std::numbers::pi / n_; }
  double x(int i) const { return i * h(); }

  int k1(int row) const { return row <= n_ / 2 ? row : row - n_; }
  int k2(int col) const { return col; }
  int nyquist() const { return n_ / 2; }

  /// 2/3-rule dealias cutoff: modes with |k_i| <= kc survive.
  int dealias_cutoff() const { return n_ / 3; }
  bool dealias_keep(int kk1, int kk2) const {
    int kc = dealias_cutoff();
    return std::abs(kk1) <= kc && std::abs(kk2) <= kc;
  }

  friend bool operator==(const FourierGrid& a, const FourierGrid& b) { return a.n_ == b.n_; }

 private:
  int n_;
};

}  // namespace emx
