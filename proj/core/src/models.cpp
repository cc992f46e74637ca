#include "emx/models.hpp"

#include <cmath>
#include <stdexcept>

namespace emx {

void Params::validate() const {
  if (!(c > 0.0)) throw std::invalid_argument("params: c must be positive");
  if (!(sigma > 0.0)) throw std::invalid_argument("params: sigma must be positive");
  if (alpha == 0.0 && beta == 0.0)
    throw std::invalid_argument("params: (alpha,beta) must not both vanish");
}

void PerturbationState::project_means() {
  omega.project_mean_zero();
  E.project_mean_zero();
  a.project_mean_zero();
}

double PerturbationState::energy_l2() const {
  VectorField2D u = velocity();
  VectorField2D b = magnetic();
  const double e2 = u.x1.l2_norm() * u.x1.l2_norm() + u.x2.l2_norm() * u.x2.l2_norm() +
                    E.l2_norm() * E.l2_norm() + b.x1.l2_norm() * b.x1.l2_norm() +
                    b.x2.l2_norm() * b.x2.l2_norm();
  return std::sqrt(e2);
}

double NormalState::energy_l2() const {
  VectorField2D u = velocity();
  const double e2 = u.x1.l2_norm() * u.x1.l2_norm() + u.x2.l2_norm() * u.x2.l2_norm() +
                    E1.l2_norm() * E1.l2_norm() + E2.l2_norm() * E2.l2_norm() +
                    b3.l2_norm() * b3.l2_norm();
  return std::sqrt(e2);
}

namespace {

// u^perp . b = -u2 b1 + u1 b2, dealiased.
ScalarField2D uperp_dot_b(const VectorField2D& u, const VectorField2D& b) {
  return dealiased_product(u.x1, b.x2) - dealiased_product(u.x2, b.x1);
}

}  // namespace

ScalarField2D ohm_current(const PerturbationState& state, const Params& params) {
  VectorField2D u = state.velocity();
  VectorField2D b = state.magnetic();
  return params.c * state.E + uperp_dot_b(u, b);
}

LorentzSplit lorentz_split(const PerturbationState& state, const Params& params) {
  const double zeta = params.background_scale;
  VectorField2D u = state.velocity();
  VectorField2D b = state.magnetic();
  ScalarField2D jb = params.c * state.E + uperp_dot_b(u, b);
  ScalarField2D q = jb - zeta * u.x2;
  // Cubic term b . grad q as nested dealiased binaries, inner product first.
  ScalarField2D remainder =
      dealiased_product(b.x1, derivative(q, 1)) + dealiased_product(b.x2, derivative(q, 2)) +
      zeta * derivative(jb, 1);
  return {(zeta * zeta) * riesz(state.omega), std::move(remainder)};
}

PerturbationState rhs_perturbation(const PerturbationState& state, const Params& params) {
  PerturbationState d = rhs_perturbation_nonlinear(state, params);
  const double c = params.c;
  d.E += c * laplacian(state.a) - (c * c) * state.E;
  d.a += c * state.E;
  d.a.project_mean_zero();
  return d;
}

PerturbationState rhs_perturbation_nonlinear(const PerturbationState& state,
                                             const Params& params) {
  const double c = params.c;
  const double zeta = params.background_scale;
  VectorField2D u = state.velocity();
  VectorField2D b = state.magnetic();
  ScalarField2D ub = uperp_dot_b(u, b);
  ScalarField2D jb = c * state.E + ub;
  ScalarField2D q = jb - zeta * u.x2;

  ScalarField2D domega = -1.0 * advect(u, state.omega) + (zeta * zeta) * riesz(state.omega) +
                         dealiased_product(b.x1, derivative(q, 1)) +
                         dealiased_product(b.x2, derivative(q, 2)) + zeta * derivative(jb, 1);
  domega.project_mean_zero();
  ScalarField2D dE = c * (zeta * u.x2 - ub);
  dE.project_mean_zero();
  return PerturbationState(std::move(domega), std::move(dE), ScalarField2D(state.grid()));
}

NormalState rhs_normal(const NormalState& state, const Params& params) {
  NormalState d = rhs_normal_nonlinear(state, params);
  const double c = params.c, s = params.sigma;
  d.E1 += c * derivative(state.b3, 2) - (s * c * c) * state.E1;
  d.E2 += -1.0 * c * derivative(state.b3, 1) - (s * c * c) * state.E2;
  d.b3 += -1.0 * c * (derivative(state.E2, 1) - derivative(state.E1, 2));
  return d;
}

NormalState rhs_normal_nonlinear(const NormalState& state, const Params& params) {
  const double c = params.c, s = params.sigma;
  VectorField2D u = state.velocity();
  // u x B with u=(u1,u2,0), B=(0,0,b3): (u2 b3, -u1 b3, 0).
  ScalarField2D uxB1 = dealiased_product(u.x2, state.b3);
  ScalarField2D uxB2 = -1.0 * dealiased_product(u.x1, state.b3);
  // Nonlinear current parts; the sigma*c*E piece lives in the linear block.
  ScalarField2D j1_nl = s * uxB1;
  ScalarField2D j2_nl = s * uxB2;
  ScalarField2D j1 = j1_nl + (s * c) * state.E1;
  ScalarField2D j2 = j2_nl + (s * c) * state.E2;
  // j x B = (j2 b3, -j1 b3); curl of it drives the vorticity.
  ScalarField2D f1 = dealiased_product(j2, state.b3);
  ScalarField2D f2 = -1.0 * dealiased_product(j1, state.b3);

  NormalState d(state.grid());
  d.omega = -1.0 * advect(u, state.omega) + derivative(f2, 1) - derivative(f1, 2);
  d.omega.project_mean_zero();
  d.E1 = -1.0 * c * j1_nl;
  d.E2 = -1.0 * c * j2_nl;
  // db3 is purely linear (Faraday).
  return d;
}

ScalarField2D rhs_euler_riesz(const ScalarField2D& omega, const Params& params) {
  ScalarField2D d = rhs_euler_riesz_nonlinear(omega, params);
  const double ab = params.alpha * params.alpha + params.beta * params.beta;
  d += (params.beta * params.beta) * omega + ab * riesz(omega);
  return d;
}

ScalarField2D rhs_euler_riesz_nonlinear(const ScalarField2D& omega, const Params& params) {
  (void)params;
  ScalarField2D d = -1.0 * advect(biot_savart(omega), omega);
  d.project_mean_zero();
  return d;
}

}  // namespace emx
