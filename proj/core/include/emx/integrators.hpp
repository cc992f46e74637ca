#pragma once

#include <array>
#include <complex>
#include <memory>
#include <string>
#include <vector>

#include "emx/models.hpp"

namespace emx {

enum class Scheme { rk4, ifrk4 };

Scheme scheme_from_string(const std::string& s);
const char* to_string(Scheme s);

struct StepperConfig {
  Scheme scheme = Scheme::ifrk4;
  double dt = 0.0;        ///< 0 = choose from cfl each step
  double cfl = 0.5;
  double t_end = 1.0;
  int snapshot_stride = 10;
  double dt_cap = 0.02;   ///< fallback advective bound when u ~ 0
  double blowup_guard = 1e4;

  void validate() const;
};

/// Real 2x2 matrix, row major.
using Mat2 = std::array<double, 4>;

/// Exact exponential of dt * M(k), M(k) = [[-c^2, -c|k|^2],[c, 0]] acting on
/// (E_hat, a_hat). The confluent branch takes over when the discriminant is
/// small relative to the generator scale.
Mat2 maxwell_mode_exponential(double c, double kk, double dt);

/// Table over the r2c half-plane for a whole grid.
struct MaxwellModeExponentials {
  MaxwellModeExponentials(const FourierGrid& grid, double c, double dt);
  const Mat2& at(std::size_t spec_index) const { return mats[spec_index]; }
  std::vector<Mat2> mats;
  double dt;
};

void apply_maxwell_exponential(const MaxwellModeExponentials& table, ScalarField2D& E,
                               ScalarField2D& a);

/// Advective (and for rk4, oscillatory/damping) step bound scaled by cfl.
double stable_dt(const VectorField2D& u, const Params& params, const StepperConfig& config,
                 Scheme scheme);

class PerturbationStepper {
 public:
  PerturbationStepper(const FourierGrid& grid, const Params& params, const StepperConfig& config);

  /// One step of the configured scheme; throws BlowupDetected past the guard.
  void step(PerturbationState& state, double t, double dt);
  double stable_dt(const PerturbationState& state) const;
  const StepperConfig& config() const { return config_; }

 private:
  void ensure_tables(double dt);
  Params params_;
  StepperConfig config_;
  FourierGrid grid_;
  std::unique_ptr<MaxwellModeExponentials> full_, half_;
};

class NormalStepper {
 public:
  NormalStepper(const FourierGrid& grid, const Params& params, const StepperConfig& config);
  void step(NormalState& state, double t, double dt);
  double stable_dt(const NormalState& state) const;

 private:
  void ensure_tables(double dt);
  Params params_;
  StepperConfig config_;
  FourierGrid grid_;
  // 3x3 complex mode exponentials for (E1,E2,b3), built by scaling-and-squaring.
  using Mat3c = std::array<std::complex<double>, 9>;
  std::vector<Mat3c> full_, half_;
  double table_dt_ = -1.0;
  void apply(const std::vector<Mat3c>& table, NormalState& s) const;
  std::vector<Mat3c> build(double dt) const;
};

class EulerRieszStepper {
 public:
  EulerRieszStepper(const FourierGrid& grid, const Params& params, const StepperConfig& config);
  void step(ScalarField2D& omega, double t, double dt);
  double stable_dt(const ScalarField2D& omega) const;

 private:
  Params params_;
  StepperConfig config_;
  FourierGrid grid_;
  // Diagonal linear symbol beta^2 - (alpha^2+beta^2) k1^2/|k|^2.
  std::vector<double> symbol_;
};

}  // namespace emx
