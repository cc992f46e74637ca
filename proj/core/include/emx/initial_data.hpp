#pragma once

#include <cstdint>
#include <string>

#include "emx/models.hpp"

namespace emx {

/// Annular bump with a cos(2 theta) angular factor:
///   g(y) = chi(|y|) (y1^2 - y2^2)/|y|^2,
/// chi smooth and compactly supported in (r0, r1).
struct BumpProfile {
  double r0 = 0.5;
  double r1 = 1.0;

  double cutoff(double r) const;
  double eval(double y1, double y2) const;
  /// sup of chi (attained at the annulus midpoint); the angular factor has
  /// modulus <= 1, so this is also sup|g|.
  double sup() const { return 1.0; }
};

enum class ScalePolicy {
  error,     ///< refuse under-resolved scale counts
  truncate,  ///< keep the resolvable scales, drop the rest
};

struct FamilyField {
  ScalarField2D field;
  int requested_scales;
  int effective_scales;  ///< == requested unless the policy truncated
};

/// Largest N whose finest annulus still spans min_cells grid cells.
int max_admissible_scales(const FourierGrid& grid, double lambda, double min_cells = 4.0);

/// f_N(x) = sum_{j=1}^N g(lambda^j y), y the centered cell coordinate;
/// copies live in disjoint annuli around the origin, mean projected out.
FamilyField build_f_family(int scale_count, double lambda, const FourierGrid& grid,
                           ScalePolicy policy = ScalePolicy::error, double min_cells = 4.0);

/// Smooth radial bump normalized so ||g||_{B^2_{2,1}} = 1 on the given grid;
/// the fixed electromagnetic profile of all sweep data.
ScalarField2D em_profile(const FourierGrid& grid);

struct ScenarioOptions {
  double lambda = 2.0;
  double epsilon = 0.0;  ///< 0 means the default 1/N
  ScalePolicy policy = ScalePolicy::error;
  double min_cells = 4.0;
  bool scaled_background = false;  ///< literal epsilon-scaled background
};

struct IllposedDatum {
  PerturbationState state;
  double epsilon;
  int scales_requested;
  int scales_effective;
  /// Background scale to run the model with (1 or epsilon).
  double background_scale;
};

/// omega0 = eps f_N, E0 = eps g, a0 = eps g (so b0 = eps grad_perp g).
IllposedDatum illposed_datum(int scale_count, const FourierGrid& grid,
                             const ScenarioOptions& opts = {});

/// Normal-structure twin with the same vorticity and matched field sizes.
NormalState normal_twin_datum(const IllposedDatum& datum);

/// Generic normal-structure datum from seeded smooth profiles.
NormalState normal_random_datum(std::uint64_t seed, double amplitude, const FourierGrid& grid);

/// Hermitian-symmetrized random field with coefficients damped by
/// (1+|k|^2)^{-m/2}, mean-free, normalized to sup-norm 1.
ScalarField2D random_smooth_field(std::uint64_t seed, double decay_m, const FourierGrid& grid);

}  // namespace emx
