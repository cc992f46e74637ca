#include "emx/initial_data.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "emx/besov.hpp"
#include "emx/errors.hpp"

namespace emx {
namespace {

constexpr double pi = std::numbers::pi;

// Centered cell coordinate in (-pi, pi].
double centered(double x) {
  double y = std::fmod(x + pi, 2.0 * pi);
  if (y < 0.0) y += 2.0 * pi;
  return y - pi;
}

}  // namespace

double BumpProfile::cutoff(double r) const {
  if (r <= r0 || r >= r1) return 0.0;
  const double w = r1 - r0;
  // Normalized so the midpoint value is 1.
  return std::exp(4.0 - w * w / ((r - r0) * (r1 - r)));
}

double BumpProfile::eval(double y1, double y2) const {
  const double r2 = y1 * y1 + y2 * y2;
  if (r2 == 0.0) return 0.0;
  return cutoff(std::sqrt(r2)) * (y1 * y1 - y2 * y2) / r2;
}

int max_admissible_scales(const FourierGrid& grid, double lambda, double min_cells) {
  const BumpProfile g;
  // Finest annulus inner radius lambda^{-N} r0 must span >= min_cells cells.
  const double bound = g.r0 / (min_cells * grid.h());
  if (bound < lambda) return 0;
  return static_cast<int>(std::floor(std::log(bound) / std::log(lambda)));
}

FamilyField build_f_family(int scale_count, double lambda, const FourierGrid& grid,
                           ScalePolicy policy, double min_cells) {
  if (scale_count < 1) throw std::invalid_argument("build_f_family: need at least one scale");
  if (lambda < 2.0) throw std::invalid_argument("build_f_family: lambda must be >= 2");
  const int n_max = max_admissible_scales(grid, lambda, min_cells);
  int n_eff = scale_count;
  if (scale_count > n_max) {
    if (policy == ScalePolicy::error)
      throw UnderResolvedError("build_f_family: " + std::to_string(scale_count) +
                                   " scales exceed the grid (max admissible " +
                                   std::to_string(n_max) + ")",
                               n_max);
    n_eff = n_max;
  }

  const BumpProfile g;
  ScalarField2D f(grid);
  auto p = f.phys_mut();
  const int n = grid.n();
  for (int i = 0; i < n; ++i) {
    const double y1 = centered(grid.x(i));
    for (int j = 0; j < n; ++j) {
      const double y2 = centered(grid.x(j));
      double v = 0.0;
      double scale = lambda;
      for (int s = 1; s <= n_eff; ++s) {
        v += g.eval(scale * y1, scale * y2);
        scale *= lambda;
      }
      p[static_cast<std::size_t>(i) * n + j] = v;
    }
  }
  f.project_mean_zero();
  return {std::move(f), scale_count, n_eff};
}

ScalarField2D em_profile(const FourierGrid& grid) {
  ScalarField2D g(grid);
  auto p = g.phys_mut();
  const int n = grid.n();
  for (int i = 0; i < n; ++i) {
    const double y1 = centered(grid.x(i));
    for (int j = 0; j < n; ++j) {
      const double y2 = centered(grid.x(j));
      const double r2 = y1 * y1 + y2 * y2;
      p[static_cast<std::size_t>(i) * n + j] =
          r2 < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - r2)) : 0.0;
    }
  }
  g.project_mean_zero();
  const double nrm = besov_norm(g, BesovSpec::B221());
  g *= 1.0 / nrm;
  return g;
}

IllposedDatum illposed_datum(int scale_count, const FourierGrid& grid,
                             const ScenarioOptions& opts) {
  FamilyField fam = build_f_family(scale_count, opts.lambda, grid, opts.policy, opts.min_cells);
  const double eps = opts.epsilon > 0.0 ? opts.epsilon : 1.0 / scale_count;
  ScalarField2D g = em_profile(grid);
  PerturbationState st(eps * fam.field, eps * g, eps * g);
  st.project_means();
  return {std::move(st), eps, fam.requested_scales, fam.effective_scales,
          opts.scaled_background ? eps : 1.0};
}

NormalState normal_twin_datum(const IllposedDatum& datum) {
  const FourierGrid& grid = datum.state.grid();
  NormalState st(grid);
  st.omega = datum.state.omega;
  ScalarField2D g = em_profile(grid);
  st.E1 = datum.epsilon * g;
  st.E2 = ScalarField2D(grid);
  st.b3 = datum.epsilon * g;
  return st;
}

NormalState normal_random_datum(std::uint64_t seed, double amplitude, const FourierGrid& grid) {
  NormalState st(grid);
  st.omega = amplitude * random_smooth_field(seed, 4.0, grid);
  st.E1 = amplitude * random_smooth_field(seed + 1, 4.0, grid);
  st.E2 = amplitude * random_smooth_field(seed + 2, 4.0, grid);
  st.b3 = amplitude * random_smooth_field(seed + 3, 4.0, grid);
  return st;
}

ScalarField2D random_smooth_field(std::uint64_t seed, double decay_m, const FourierGrid& grid) {
  if (decay_m < 2.0) throw std::invalid_argument("random_smooth_field: decay exponent m >= 2");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int n = grid.n();
  const int cols = grid.spec_cols();
  ScalarField2D f(grid);
  auto s = f.spec_mut();
  for (int i = 0; i < n; ++i) {
    const double k1 = grid.k1(i);
    for (int j = 0; j < cols; ++j) {
      const double k2 = grid.k2(j);
      const double damp = std::pow(1.0 + k1 * k1 + k2 * k2, -0.5 * decay_m);
      s[static_cast<std::size_t>(i) * cols + j] =
          damp * std::complex<double>(gauss(rng), gauss(rng));
    }
  }
  // Hermitian symmetry on the self-conjugate columns j = 0 and j = n/2.
  for (int j : {0, n / 2}) {
    s[j].imag(0.0);
    s[static_cast<std::size_t>(n / 2) * cols + j].imag(0.0);
    for (int i = 1; i < n / 2; ++i) {
      s[static_cast<std::size_t>(n - i) * cols + j] =
          std::conj(s[static_cast<std::size_t>(i) * cols + j]);
    }
  }
  s[0] = 0.0;
  const double m = f.max_abs();
  if (m > 0.0) f *= 1.0 / m;
  return f;
}

}  // namespace emx
