#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "emx/besov.hpp"
#include "emx/flow.hpp"
#include "emx/integrators.hpp"
#include "emx/models.hpp"

namespace emx {

/// One sampled row of the run series. Columns are written to CSV in exactly
/// this order.
struct SeriesPoint {
  double t = 0.0;
  double linf_omega = 0.0;
  double besov1_omega = 0.0;     ///< ||omega||_{B^1_{2,1}}
  double energy_l2 = 0.0;        ///< ||(u,E,b)||_{L^2}
  double besov2_Eb = 0.0;        ///< ||(cE,b)||_{B^2_{2,1}}
  double riesz_linf = 0.0;       ///< ||R omega||_inf
  double remainder_b121 = 0.0;   ///< ||F||_{B^1_{2,1}}, F the Lorentz remainder
  double int_riesz_linf = 0.0;   ///< running trapezoid integral of riesz_linf
  double int_remainder_b121 = 0.0;
};

/// Stored fields at one snapshot time. Field names depend on the model:
/// perturbation stores omega/E/a, normal stores omega/E1/E2/b3, euler_riesz
/// stores omega. Perturbation runs also carry the flow map of u.
struct Snapshot {
  double t = 0.0;
  std::vector<std::pair<std::string, ScalarField2D>> fields;
  std::optional<FlowMap> flow;

  const ScalarField2D& field(const std::string& name) const;
  bool has_field(const std::string& name) const;
};

struct RunRecord {
  nlohmann::json config;  ///< full config snapshot
  std::string model;      ///< perturbation | normal | euler_riesz
  Params params;
  int grid_n = 0;
  std::vector<SeriesPoint> series;
  std::vector<Snapshot> snapshots;
  std::string partition_profile;
  double dt_nominal = 0.0;  ///< configured dt (0 = adaptive); recorded for tolerances
  double wall_seconds = 0.0;
  std::string started_at;  ///< ISO-8601 wall clock at launch

  /// Throws std::runtime_error unless the series is strictly increasing in t
  /// and nonempty.
  void validate() const;
};

/// Machine-readable outcome of one diagnostic check.
struct CheckReport {
  std::string name;
  std::string anchor;  ///< stable label of the statement being exercised
  bool pass = false;
  nlohmann::json details;
};

nlohmann::json to_json(const CheckReport& report);

/// Series measurements for each model. The running integral columns are left
/// at zero; accumulate_integrals chains them.
SeriesPoint measure_perturbation(const PerturbationState& state, const Params& params, double t);
SeriesPoint measure_normal(const NormalState& state, const Params& params, double t);
SeriesPoint measure_euler_riesz(const ScalarField2D& omega, const Params& params, double t);

/// Trapezoid-advance the running integrals of next from prev.
void accumulate_integrals(SeriesPoint& next, const SeriesPoint& prev);

/// L2 energy never rises: max positive excursion of energy_l2 above its
/// initial value must stay below tol.
CheckReport energy_check(const RunRecord& record, double tol = 1e-7);

/// Hyperbolic Maxwell estimate with pinned constants: at every snapshot time
///   sup_{tau<=t} ||(cE,b)(tau)||_{B^s_{2,1}}
///     <= 2 ||(cE0,b0)||_{B^s_{2,1}} + 2c int_0^t ||F(tau)||_{B^s_{2,1}} dtau,
/// F = background_scale * u2 - u^perp . b the Ampere forcing, recomputed from
/// the stored snapshots. Perturbation model only.
CheckReport maxwell_estimate_check(const RunRecord& record, double s = 2.0);

/// Local-existence bound: ||(u,E,b)(t)||_{B^2_{2,1}} <= 4 * initial value.
/// Reports the largest factor attained and the first time the factor 4 is
/// exceeded; the horizon constant is an output, never asserted.
CheckReport local_bound_check(const RunRecord& record);

/// Lorentz remainder control: ratio of the measured running integral
/// int_0^t ||F||_{B^1_{2,1}} to
///   (E0 ||w0||_{B^1_{2,1}} + 1)(||(cE0,b0)||_{B^2_{2,1}} + c^2 t ||w0||_{B^1_{2,1}}) t
/// with the implicit constant set to 1. Reports the max ratio over the run;
/// pass iff it stays below ratio_bound.
CheckReport lorentz_remainder_check(const RunRecord& record, double ratio_bound = 1e3);

/// The three sup-norm series of the Duhamel chain at snapshot times:
///   omega o Phi (t) = e^{tR'} w0
///                   - int_0^t e^{(t-tau)R'} [R',Phi(tau)] w(tau) dtau
///                   + int_0^t e^{(t-tau)R'} (F o Phi)(tau) dtau,
/// R' = background_scale^2 R. Integrals by trapezoid over the stored
/// snapshots; residual = ||omega o Phi - reconstruction||_inf.
struct DuhamelReport {
  std::vector<double> t;
  std::vector<double> leading;     ///< ||e^{tR'} w0||_inf
  std::vector<double> commutator;  ///< ||commutator integral||_inf
  std::vector<double> forcing;     ///< ||forcing integral||_inf
  std::vector<double> residual;    ///< reconstruction defect, sup norm
};

/// strict = true throws InsufficientSnapshotsError when the final residual
/// exceeds 10% of the leading term.
DuhamelReport duhamel_decomposition(const RunRecord& record, bool strict = true);

struct InflationRow {
  int N = 0;
  double linf0 = 0.0;
  double max_linf = 0.0;
  double ratio = 0.0;
  /// First series time with ratio above each threshold; -1 when never reached.
  std::vector<double> first_crossing;
};

struct InflationReport {
  std::vector<double> thresholds;
  std::vector<InflationRow> rows;
  double fit_slope = 0.0;      ///< least squares of log(ratio) vs log(N)
  double fit_intercept = 0.0;
};

/// Requires at least 3 distinct N values.
InflationReport inflation_report(const std::vector<std::pair<int, const RunRecord*>>& runs,
                                 const std::vector<double>& thresholds = {2.0, 5.0, 10.0});

nlohmann::json to_json(const DuhamelReport& report);
nlohmann::json to_json(const InflationReport& report);

}  // namespace emx
