#include "emx/field.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace emx {
namespace {

// One r2c/c2r plan pair per grid size, executed on scratch buffers so the
// plans never alias caller memory.
struct PlanPair {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
  double* real_buf = nullptr;
  fftw_complex* cplx_buf = nullptr;
  std::size_t nreal = 0, ncplx = 0;

  explicit PlanPair(int n) {
    nreal = static_cast<std::size_t>(n) * n;
    ncplx = static_cast<std::size_t>(n) * (n / 2 + 1);
    real_buf = fftw_alloc_real(nreal);
    cplx_buf = fftw_alloc_complex(ncplx);
    fwd = fftw_plan_dft_r2c_2d(n, n, real_buf, cplx_buf, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_c2r_2d(n, n, cplx_buf, real_buf, FFTW_ESTIMATE);
  }
  ~PlanPair() {
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
    fftw_free(real_buf);
    fftw_free(cplx_buf);
  }
};

PlanPair& plans_for(int n) {
  static std::map<int, std::unique_ptr<PlanPair>> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, std::make_unique<PlanPair>(n)).first;
  return *it->second;
}

std::mutex& fft_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

ScalarField2D::ScalarField2D(const FourierGrid& grid)
    : grid_(grid), phys_(grid.size_phys(), 0.0), spec_(grid.size_spec(), {0.0, 0.0}) {}

void ScalarField2D::ensure_spec() const {
  if (spec_valid_) return;
  auto& p = plans_for(grid_.n());
  std::lock_guard<std::mutex> lock(fft_mutex());
  std::memcpy(p.real_buf, phys_.data(), p.nreal * sizeof(double));
  fftw_execute(p.fwd);
  const double scale = 1.0 / static_cast<double>(p.nreal);
  for (std::size_t m = 0; m < p.ncplx; ++m)
    spec_[m] = std::complex<double>(p.cplx_buf[m][0], p.cplx_buf[m][1]) * scale;
  spec_valid_ = true;
}

void ScalarField2D::ensure_phys() const {
  if (phys_valid_) return;
  auto& p = plans_for(grid_.n());
  std::lock_guard<std::mutex> lock(fft_mutex());
  for (std::size_t m = 0; m < p.ncplx; ++m) {
    p.cplx_buf[m][0] = spec_[m].real();
    p.cplx_buf[m][1] = spec_[m].imag();
  }
  fftw_execute(p.bwd);
  std::memcpy(phys_.data(), p.real_buf, p.nreal * sizeof(double));
  phys_valid_ = true;
}

std::span<const double> ScalarField2D::phys() const {
  ensure_phys();
  return phys_;
}

std::span<const std::complex<double>> ScalarField2D::spec() const {
  ensure_spec();
  return spec_;
}

std::span<double> ScalarField2D::phys_mut() {
  ensure_phys();
  spec_valid_ = false;
  return phys_;
}

std::span<std::complex<double>> ScalarField2D::spec_mut() {
  ensure_spec();
  phys_valid_ = false;
  return spec_;
}

double ScalarField2D::mean() const { return spec()[0].real(); }

double ScalarField2D::max_abs() const {
  double m = 0.0;
  for (double v : phys()) m = std::max(m, std::abs(v));
  return m;
}

double ScalarField2D::l2_norm() const {
  // Parseval with r2c half-plane weights: interior columns count twice.
  const int n = grid_.n();
  const int cols = grid_.spec_cols();
  auto s = spec();
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < cols; ++j) {
      double w = (j == 0 || j == n / 2) ? 1.0 : 2.0;
      sum += w * std::norm(s[static_cast<std::size_t>(i) * cols + j]);
    }
  }
  const double area = 4.0 * std::numbers::pi * std::numbers::pi;
  return std::sqrt(area * sum);
}

void ScalarField2D::project_mean_zero() {
  auto s = spec_mut();
  s[0] = 0.0;
}

ScalarField2D& ScalarField2D::operator+=(const ScalarField2D& other) {
  if (!(grid_ == other.grid_)) throw std::invalid_argument("field grid mismatch");
  auto s = spec_mut();
  auto o = other.spec();
  for (std::size_t m = 0; m < s.size(); ++m) s[m] += o[m];
  return *this;
}

ScalarField2D& ScalarField2D::operator-=(const ScalarField2D& other) {
  if (!(grid_ == other.grid_)) throw std::invalid_argument("field grid mismatch");
  auto s = spec_mut();
  auto o = other.spec();
  for (std::size_t m = 0; m < s.size(); ++m) s[m] -= o[m];
  return *this;
}

ScalarField2D& ScalarField2D::operator*=(double sc) {
  auto s = spec_mut();
  for (auto& v : s) v *= sc;
  return *this;
}

ScalarField2D operator+(ScalarField2D a, const ScalarField2D& b) { return a += b; }
ScalarField2D operator-(ScalarField2D a, const ScalarField2D& b) { return a -= b; }
ScalarField2D operator*(double s, ScalarField2D f) { return f *= s; }

double VectorField2D::max_abs() const {
  double m = 0.0;
  auto p1 = x1.phys();
  auto p2 = x2.phys();
  for (std::size_t i = 0; i < p1.size(); ++i) m = std::max(m, std::hypot(p1[i], p2[i]));
  return m;
}

}  // namespace emx
