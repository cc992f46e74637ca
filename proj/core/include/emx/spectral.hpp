#pragma once

#include <complex>
#include <functional>

#include "emx/field.hpp"

namespace emx {

/// Apply a Fourier multiplier m(k1,k2) to a copy of f.
ScalarField2D apply_multiplier(const ScalarField2D& f,
                               const std::function<std::complex<double>(int, int)>& m);

/// Explicit view conversions. The field representation is lazy either way;
/// these force the requested view to be materialized.
ScalarField2D to_spectral(const ScalarField2D& f);
ScalarField2D to_physical(const ScalarField2D& f);

/// Spectral d/dx_axis, axis in {1,2}. Nyquist modes along the derivative
/// direction are zeroed.
ScalarField2D derivative(const ScalarField2D& f, int axis);

/// Multiplier -1/|k|^2, k != 0. Requires a mean-free input.
ScalarField2D inverse_laplacian(const ScalarField2D& f);

ScalarField2D laplacian(const ScalarField2D& f);

/// Riesz operator d^2_{x1} (-Laplace)^{-1}: multiplier -k1^2/|k|^2, mean -> 0.
/// The curl of the Lorentz force around e1 splits as R omega + remainder with
/// this sign; equivalently R omega = -d1 u2.
ScalarField2D riesz(const ScalarField2D& f);

/// exp(t R): multiplier exp(-t k1^2/|k|^2); the mean mode carries factor 1.
ScalarField2D riesz_semigroup(const ScalarField2D& f, double t);

/// u = grad^perp Laplace^{-1} omega = (-d2, d1) psi. Projects the mean out
/// of omega first.
VectorField2D biot_savart(const ScalarField2D& omega);

/// curl of a 2d vector field: d1 v2 - d2 v1.
ScalarField2D curl(const VectorField2D& v);
ScalarField2D divergence(const VectorField2D& v);
VectorField2D gradient(const ScalarField2D& f);

/// grad^perp f = (-d2 f, d1 f); divergence-free by construction.
VectorField2D grad_perp(const ScalarField2D& f);

/// Truncate f by the 2/3-rule mask.
ScalarField2D dealias(const ScalarField2D& f);

/// Pointwise physical product of the mask-truncated inputs, truncated again.
ScalarField2D dealiased_product(const ScalarField2D& f, const ScalarField2D& g);

/// Dealiased v . grad f.
ScalarField2D advect(const VectorField2D& v, const ScalarField2D& f);

}  // namespace emx
