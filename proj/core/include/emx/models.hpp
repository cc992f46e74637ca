#pragma once

#include "emx/field.hpp"
#include "emx/spectral.hpp"

namespace emx {

struct Params {
  double c = 1.0;      ///< speed of light
  double sigma = 1.0;  ///< conductivity (fixed 1 in the perturbation model)
  double alpha = 1.0;  ///< background magnetic components for the Euler-Riesz model
  double beta = 0.0;
  /// Scale of the horizontal background in the perturbation model; 1 is the
  /// unit background, smaller values reproduce the literally-scaled datum.
  double background_scale = 1.0;

  void validate() const;
};

/// State of the perturbed system around the horizontal background e1:
/// vorticity, scalar third-component electric field, magnetic potential
/// (b = grad_perp a). All mean-free.
struct PerturbationState {
  ScalarField2D omega;
  ScalarField2D E;
  ScalarField2D a;

  explicit PerturbationState(const FourierGrid& grid) : omega(grid), E(grid), a(grid) {}
  PerturbationState(ScalarField2D w, ScalarField2D e, ScalarField2D pot)
      : omega(std::move(w)), E(std::move(e)), a(std::move(pot)) {}

  const FourierGrid& grid() const { return omega.grid(); }
  VectorField2D velocity() const { return biot_savart(omega); }
  VectorField2D magnetic() const { return grad_perp(a); }
  void project_means();

  /// ||(u,E,b)||_{L2}.
  double energy_l2() const;
};

/// Normal-structure baseline: horizontal E, vertical scalar magnetic field.
struct NormalState {
  ScalarField2D omega;
  ScalarField2D E1;
  ScalarField2D E2;
  ScalarField2D b3;

  explicit NormalState(const FourierGrid& grid) : omega(grid), E1(grid), E2(grid), b3(grid) {}

  const FourierGrid& grid() const { return omega.grid(); }
  VectorField2D velocity() const { return biot_savart(omega); }
  double energy_l2() const;
};

/// Ohm's law for the perturbation system: j_b = cE + u^perp . b.
ScalarField2D ohm_current(const PerturbationState& state, const Params& params);

struct LorentzSplit {
  ScalarField2D riesz_part;  ///< R omega
  ScalarField2D remainder;   ///< b . grad(j_b - u2) + d1 j_b
};

/// Split of the curl of the Lorentz force around the background.
LorentzSplit lorentz_split(const PerturbationState& state, const Params& params);

/// Full time derivative of the perturbation system (sigma = 1).
PerturbationState rhs_perturbation(const PerturbationState& state, const Params& params);

/// Same with the stiff linear Maxwell block (c Lap a - c^2 E, c E) removed;
/// this is the nonlinearity handed to the integrating-factor scheme.
PerturbationState rhs_perturbation_nonlinear(const PerturbationState& state, const Params& params);

NormalState rhs_normal(const NormalState& state, const Params& params);
NormalState rhs_normal_nonlinear(const NormalState& state, const Params& params);

/// Euler-Riesz model: -u.grad w + beta^2 w + (alpha^2+beta^2) R w.
ScalarField2D rhs_euler_riesz(const ScalarField2D& omega, const Params& params);
ScalarField2D rhs_euler_riesz_nonlinear(const ScalarField2D& omega, const Params& params);

}  // namespace emx
