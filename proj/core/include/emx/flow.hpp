#pragma once

#include <vector>

#include "emx/besov.hpp"
#include "emx/field.hpp"

namespace emx {

/// Periodic cubic B-spline interpolant of a grid field. Coefficients are
/// obtained spectrally (division by the B-spline symbol), so the interpolant
/// matches the samples exactly and evaluation is O(1) per point.
class PeriodicSpline2D {
 public:
  explicit PeriodicSpline2D(const ScalarField2D& f);
  double eval(double x1, double x2) const;

 private:
  int n_;
  double inv_h_;
  std::vector<double> coeff_;
};

enum class FlowDirection { forward, backward };

/// Characteristic maps of a velocity field, stored as periodic displacement
/// fields: Phi(x) = x + d_plus(x), Phi^{-1}(x) = x + d_minus(x).
struct FlowMap {
  VectorField2D d_plus;
  VectorField2D d_minus;
  double t = 0.0;

  explicit FlowMap(const FourierGrid& grid) : d_plus(grid), d_minus(grid) {}

  const FourierGrid& grid() const { return d_plus.grid(); }
  bool is_identity(double tol = 1e-14) const;

  /// max over the grid of |Phi(Phi^{-1}(x)) - x|.
  double roundtrip_deviation() const;
  /// max |det(DPhi) - 1| with spectral Jacobian of the displacement.
  double volume_deviation() const;
};

/// One time step of both maps. The forward displacement moves by RK4 with
/// velocities interpolated at particle positions; the backward map advances
/// semi-Lagrangially along departure characteristics.
FlowMap advance_flow(const FlowMap& fm, const VectorField2D& u_begin, const VectorField2D& u_mid,
                     const VectorField2D& u_end, double dt);
FlowMap advance_flow(const FlowMap& fm, const VectorField2D& u_frozen, double dt);

/// f evaluated at Phi(x) (forward) or Phi^{-1}(x) (backward).
ScalarField2D compose(const ScalarField2D& f, const FlowMap& fm, FlowDirection direction);

/// [R, Phi] omega = R(omega o Phi) - (R omega) o Phi.
ScalarField2D riesz_commutator(const ScalarField2D& omega, const FlowMap& fm);

/// ||Phi - Id||_{W^{1,inf}} seminorm of the displacement Jacobian.
double displacement_seminorm(const VectorField2D& d);
/// ||Phi||_{W^{1,inf}}: max entry of the full Jacobian I + grad d.
double full_map_seminorm(const VectorField2D& d);

/// Empirical constant of the commutator bound:
/// ||[R,Phi]w||_{B^{2/p}_{p,1}} / (max displacement seminorm * ||w||_{B^{2/p}_{p,1}}).
double commutator_ratio(const ScalarField2D& omega, const FlowMap& fm, double p);

/// Empirical constant of the flow-composition bound:
/// ||f o Phi||_{B^0_{inf,1}} / ((1 + log(||Phi|| ||Phi^{-1}||)) ||f||_{B^0_{inf,1}}).
double vishik_ratio(const ScalarField2D& f, const FlowMap& fm);

}  // namespace emx
