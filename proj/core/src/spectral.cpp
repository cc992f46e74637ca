#include "emx/spectral.hpp"

#include <cmath>

#include "emx/errors.hpp"

namespace emx {

ScalarField2D apply_multiplier(const ScalarField2D& f,
                               const std::function<std::complex<double>(int, int)>& m) {
  ScalarField2D out(f.grid());
  const FourierGrid& g = f.grid();
  const int n = g.n();
  const int cols = g.spec_cols();
  auto in = f.spec();
  auto os = out.spec_mut();
  for (int i = 0; i < n; ++i) {
    const int k1 = g.k1(i);
    for (int j = 0; j < cols; ++j) {
      const std::size_t idx = static_cast<std::size_t>(i) * cols + j;
      os[idx] = m(k1, g.k2(j)) * in[idx];
    }
  }
  return out;
}

ScalarField2D to_spectral(const ScalarField2D& f) {
  ScalarField2D out = f;
  out.spec();
  return out;
}

ScalarField2D to_physical(const ScalarField2D& f) {
  ScalarField2D out = f;
  out.phys();
  return out;
}

ScalarField2D derivative(const ScalarField2D& f, int axis) {
  if (axis != 1 && axis != 2) throw std::invalid_argument("derivative: axis must be 1 or 2");
  const int nyq = f.grid().nyquist();
  return apply_multiplier(f, [axis, nyq](int k1, int k2) -> std::complex<double> {
    const int k = axis == 1 ? k1 : k2;
    if (std::abs(k1) == nyq || std::abs(k2) == nyq) return 0.0;
    return std::complex<double>(0.0, k);
  });
}

ScalarField2D inverse_laplacian(const ScalarField2D& f) {
  if (std::abs(f.mean()) > 1e-12 * std::max(f.max_abs(), 1e-300))
    throw NonzeroMeanError("inverse_laplacian: input has nonzero mean " +
                           std::to_string(f.mean()));
  return apply_multiplier(f, [](int k1, int k2) -> std::complex<double> {
    const double kk = double(k1) * k1 + double(k2) * k2;
    return kk == 0.0 ? 0.0 : -1.0 / kk;
  });
}

ScalarField2D laplacian(const ScalarField2D& f) {
  return apply_multiplier(f, [](int k1, int k2) -> std::complex<double> {
    return -(double(k1) * k1 + double(k2) * k2);
  });
}

ScalarField2D riesz(const ScalarField2D& f) {
  return apply_multiplier(f, [](int k1, int k2) -> std::complex<double> {
    const double kk = double(k1) * k1 + double(k2) * k2;
    return kk == 0.0 ? 0.0 : -double(k1) * k1 / kk;
  });
}

ScalarField2D riesz_semigroup(const ScalarField2D& f, double t) {
  if (t < 0.0) throw std::invalid_argument("riesz_semigroup: t must be >= 0");
  return apply_multiplier(f, [t](int k1, int k2) -> std::complex<double> {
    const double kk = double(k1) * k1 + double(k2) * k2;
    return kk == 0.0 ? 1.0 : std::exp(-t * double(k1) * k1 / kk);
  });
}

VectorField2D biot_savart(const ScalarField2D& omega) {
  ScalarField2D w = omega;
  w.project_mean_zero();
  ScalarField2D psi = inverse_laplacian(w);
  VectorField2D u(-1.0 * derivative(psi, 2), derivative(psi, 1), /*div_free=*/true);
  return u;
}

ScalarField2D curl(const VectorField2D& v) { return derivative(v.x2, 1) - derivative(v.x1, 2); }

ScalarField2D divergence(const VectorField2D& v) {
  return derivative(v.x1, 1) + derivative(v.x2, 2);
}

VectorField2D gradient(const ScalarField2D& f) {
  return VectorField2D(derivative(f, 1), derivative(f, 2));
}

VectorField2D grad_perp(const ScalarField2D& f) {
  return VectorField2D(-1.0 * derivative(f, 2), derivative(f, 1), /*div_free=*/true);
}

ScalarField2D dealias(const ScalarField2D& f) {
  const FourierGrid& g = f.grid();
  return apply_multiplier(f, [&g](int k1, int k2) -> std::complex<double> {
    return g.dealias_keep(k1, k2) ? 1.0 : 0.0;
  });
}

ScalarField2D dealiased_product(const ScalarField2D& f, const ScalarField2D& g) {
  if (!(f.grid() == g.grid())) throw std::invalid_argument("dealiased_product: grid mismatch");
  ScalarField2D ft = dealias(f);
  ScalarField2D gt = dealias(g);
  ScalarField2D out(f.grid());
  auto pf = ft.phys();
  auto pg = gt.phys();
  auto po = out.phys_mut();
  for (std::size_t i = 0; i < po.size(); ++i) po[i] = pf[i] * pg[i];
  return dealias(out);
}

ScalarField2D advect(const VectorField2D& v, const ScalarField2D& f) {
  return dealiased_product(v.x1, derivative(f, 1)) + dealiased_product(v.x2, derivative(f, 2));
}

}  // namespace emx
