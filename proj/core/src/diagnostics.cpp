#include "emx/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "emx/errors.hpp"
#include "emx/spectral.hpp"

namespace emx {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double linf(const ScalarField2D& f) { return lebesgue_norm(f, BesovSpec::infinity()); }

ScalarField2D ampere_forcing(const PerturbationState& state, const Params& params) {
  VectorField2D u = state.velocity();
  VectorField2D b = state.magnetic();
  ScalarField2D ub = dealiased_product(u.x1, b.x2) - dealiased_product(u.x2, b.x1);
  return params.background_scale * u.x2 - ub;
}

std::vector<double> trapezoid_running(const std::vector<double>& t,
                                      const std::vector<double>& v) {
  std::vector<double> out(t.size(), 0.0);
  for (std::size_t i = 1; i < t.size(); ++i)
    out[i] = out[i - 1] + 0.5 * (t[i] - t[i - 1]) * (v[i] + v[i - 1]);
  return out;
}

}  // namespace

const ScalarField2D& Snapshot::field(const std::string& name) const {
  for (const auto& [key, f] : fields)
    if (key == name) return f;
  throw std::runtime_error("snapshot has no field '" + name + "'");
}

bool Snapshot::has_field(const std::string& name) const {
  for (const auto& [key, f] : fields) {
    (void)f;
    if (key == name) return true;
  }
  return false;
}

void RunRecord::validate() const {
  if (series.empty()) throw std::runtime_error("run record: empty series");
  for (std::size_t i = 1; i < series.size(); ++i)
    if (!(series[i].t > series[i - 1].t))
      throw std::runtime_error("run record: series not strictly increasing in t");
}

nlohmann::json to_json(const CheckReport& report) {
  return {{"name", report.name},
          {"anchor", report.anchor},
          {"pass", report.pass},
          {"details", report.details}};
}

SeriesPoint measure_perturbation(const PerturbationState& state, const Params& params,
                                 double t) {
  SeriesPoint p;
  p.t = t;
  p.linf_omega = linf(state.omega);
  p.besov1_omega = besov_norm(state.omega, BesovSpec::B121());
  p.energy_l2 = state.energy_l2();
  VectorField2D b = state.magnetic();
  ScalarField2D cE = params.c * state.E;
  p.besov2_Eb = besov_norm({&cE, &b.x1, &b.x2}, BesovSpec::B221());
  p.riesz_linf = linf(riesz(state.omega));
  p.remainder_b121 = besov_norm(lorentz_split(state, params).remainder, BesovSpec::B121());
  return p;
}

SeriesPoint measure_normal(const NormalState& state, const Params& params, double t) {
  SeriesPoint p;
  p.t = t;
  p.linf_omega = linf(state.omega);
  p.besov1_omega = besov_norm(state.omega, BesovSpec::B121());
  p.energy_l2 = state.energy_l2();
  ScalarField2D cE1 = params.c * state.E1;
  ScalarField2D cE2 = params.c * state.E2;
  p.besov2_Eb = besov_norm({&cE1, &cE2, &state.b3}, BesovSpec::B221());
  p.riesz_linf = linf(riesz(state.omega));
  // Full curl of the Lorentz force j x B; the normal system has no Riesz part.
  VectorField2D u = state.velocity();
  const double s = params.sigma, c = params.c;
  ScalarField2D j1 = s * (c * state.E1 + dealiased_product(u.x2, state.b3));
  ScalarField2D j2 = s * (c * state.E2 - dealiased_product(u.x1, state.b3));
  ScalarField2D f1 = dealiased_product(j2, state.b3);
  ScalarField2D f2 = -1.0 * dealiased_product(j1, state.b3);
  p.remainder_b121 = besov_norm(derivative(f2, 1) - derivative(f1, 2), BesovSpec::B121());
  return p;
}

SeriesPoint measure_euler_riesz(const ScalarField2D& omega, const Params& params, double t) {
  SeriesPoint p;
  p.t = t;
  p.linf_omega = linf(omega);
  p.besov1_omega = besov_norm(omega, BesovSpec::B121());
  VectorField2D u = biot_savart(omega);
  p.energy_l2 =
      std::sqrt(u.x1.l2_norm() * u.x1.l2_norm() + u.x2.l2_norm() * u.x2.l2_norm());
  p.besov2_Eb = 0.0;
  p.riesz_linf = linf(riesz(omega));
  // The non-transport forcing besides the Riesz term is beta^2 omega.
  p.remainder_b121 = params.beta * params.beta * p.besov1_omega;
  return p;
}

void accumulate_integrals(SeriesPoint& next, const SeriesPoint& prev) {
  const double half = 0.5 * (next.t - prev.t);
  next.int_riesz_linf = prev.int_riesz_linf + half * (next.riesz_linf + prev.riesz_linf);
  next.int_remainder_b121 =
      prev.int_remainder_b121 + half * (next.remainder_b121 + prev.remainder_b121);
}

CheckReport energy_check(const RunRecord& record, double tol) {
  record.validate();
  const double e0 = record.series.front().energy_l2;
  double excursion = 0.0, t_at = 0.0;
  for (const SeriesPoint& p : record.series) {
    if (p.energy_l2 - e0 > excursion) {
      excursion = p.energy_l2 - e0;
      t_at = p.t;
    }
  }
  CheckReport r;
  r.name = "energy";
  r.anchor = "lemma-3.1-energy-law";
  r.pass = excursion <= tol;
  r.details = {{"initial_energy", e0},
               {"max_positive_excursion", excursion},
               {"excursion_time", t_at},
               {"tolerance", tol},
               {"dt_nominal", record.dt_nominal}};
  return r;
}

CheckReport maxwell_estimate_check(const RunRecord& record, double s) {
  record.validate();
  if (record.model != "perturbation")
    throw ConfigError("maxwell_estimate_check: perturbation model only");
  if (record.snapshots.empty())
    throw std::runtime_error("maxwell_estimate_check: no snapshots");

  const BesovSpec spec{s, 2.0, 1.0};
  const double c = record.params.c;
  std::vector<double> t, lhs, fnorm;
  for (const Snapshot& snap : record.snapshots) {
    PerturbationState state(snap.field("omega"), snap.field("E"), snap.field("a"));
    VectorField2D b = state.magnetic();
    ScalarField2D cE = c * state.E;
    t.push_back(snap.t);
    lhs.push_back(besov_norm({&cE, &b.x1, &b.x2}, spec));
    fnorm.push_back(besov_norm(ampere_forcing(state, record.params), spec));
  }
  std::vector<double> intF = trapezoid_running(t, fnorm);

  bool pass = true;
  double min_margin = kInf, worst_t = 0.0, sup_lhs = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    sup_lhs = std::max(sup_lhs, lhs[i]);
    const double rhs = 2.0 * lhs[0] + 2.0 * c * intF[i];
    const double margin = rhs - sup_lhs;
    if (margin < min_margin) {
      min_margin = margin;
      worst_t = t[i];
    }
    if (sup_lhs > rhs) pass = false;
  }
  CheckReport r;
  r.name = "maxwell";
  r.anchor = "lemma-2.5-maxwell-estimate";
  r.pass = pass;
  r.details = {{"s", s},
               {"c", c},
               {"initial_norm", lhs[0]},
               {"final_sup_lhs", sup_lhs},
               {"final_forcing_integral", intF.back()},
               {"min_margin", min_margin},
               {"tightest_time", worst_t},
               {"samples", t.size()}};
  return r;
}

CheckReport local_bound_check(const RunRecord& record) {
  record.validate();
  if (record.snapshots.empty()) throw std::runtime_error("local_bound_check: no snapshots");

  const BesovSpec spec = BesovSpec::B221();
  std::vector<double> t, norm;
  for (const Snapshot& snap : record.snapshots) {
    t.push_back(snap.t);
    if (record.model == "perturbation") {
      PerturbationState state(snap.field("omega"), snap.field("E"), snap.field("a"));
      VectorField2D u = state.velocity();
      VectorField2D b = state.magnetic();
      norm.push_back(besov_norm({&u.x1, &u.x2, &state.E, &b.x1, &b.x2}, spec));
    } else if (record.model == "normal") {
      VectorField2D u = biot_savart(snap.field("omega"));
      norm.push_back(besov_norm(
          {&u.x1, &u.x2, &snap.field("E1"), &snap.field("E2"), &snap.field("b3")}, spec));
    } else {
      VectorField2D u = biot_savart(snap.field("omega"));
      norm.push_back(besov_norm({&u.x1, &u.x2}, spec));
    }
  }
  const double n0 = norm[0];
  double max_factor = 1.0, first_exceed = -1.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double factor = n0 > 0.0 ? norm[i] / n0 : 1.0;
    max_factor = std::max(max_factor, factor);
    if (factor > 4.0 && first_exceed < 0.0) first_exceed = t[i];
  }
  CheckReport r;
  r.name = "local_bound";
  r.anchor = "theorem-3.2-local-bound";
  r.pass = first_exceed < 0.0;
  r.details = {{"initial_norm", n0},
               {"max_factor", max_factor},
               {"factor_bound", 4.0},
               {"first_exceedance_time", first_exceed},
               {"horizon", t.back()}};
  return r;
}

CheckReport lorentz_remainder_check(const RunRecord& record, double ratio_bound) {
  record.validate();
  const SeriesPoint& p0 = record.series.front();
  const double c = record.params.c;
  const double lead = p0.energy_l2 * p0.besov1_omega + 1.0;

  double max_ratio = 0.0, t_at = 0.0;
  for (const SeriesPoint& p : record.series) {
    if (p.t <= 0.0) continue;
    const double rhs = lead * (p0.besov2_Eb + c * c * p.t * p0.besov1_omega) * p.t;
    const double ratio = rhs > 0.0 ? p.int_remainder_b121 / rhs : 0.0;
    if (ratio > max_ratio) {
      max_ratio = ratio;
      t_at = p.t;
    }
  }
  // Cor 4.2 spot check at p=1: int ||(cE,b)||_{B^2} against
  // t ||(cE0,b0)||_{B^2} + c^2 t^2 ||w0||_{B^1}.
  double int_eb = 0.0, cor_ratio = 0.0;
  for (std::size_t i = 1; i < record.series.size(); ++i) {
    const SeriesPoint& a = record.series[i - 1];
    const SeriesPoint& b = record.series[i];
    int_eb += 0.5 * (b.t - a.t) * (a.besov2_Eb + b.besov2_Eb);
    const double rhs = b.t * p0.besov2_Eb + c * c * b.t * b.t * p0.besov1_omega;
    if (rhs > 0.0) cor_ratio = std::max(cor_ratio, int_eb / rhs);
  }
  const SeriesPoint& last = record.series.back();
  CheckReport r;
  r.name = "lorentz";
  r.anchor = "prop-4.3-lorentz-remainder";
  r.pass = std::isfinite(max_ratio) && max_ratio <= ratio_bound;
  r.details = {{"max_ratio", max_ratio},
               {"ratio_time", t_at},
               {"ratio_bound", ratio_bound},
               {"int_remainder_b121", last.int_remainder_b121},
               {"int_riesz_linf", last.int_riesz_linf},
               {"riesz_over_remainder",
                last.int_remainder_b121 > 0.0
                    ? last.int_riesz_linf / last.int_remainder_b121
                    : kInf},
               {"corollary_4_2_p1_ratio", cor_ratio}};
  return r;
}

DuhamelReport duhamel_decomposition(const RunRecord& record, bool strict) {
  record.validate();
  if (record.model != "perturbation")
    throw ConfigError("duhamel_decomposition: perturbation model only");
  if (record.snapshots.size() < 2)
    throw InsufficientSnapshotsError("duhamel_decomposition: need at least 2 snapshots");
  for (const Snapshot& snap : record.snapshots)
    if (!snap.flow)
      throw InsufficientSnapshotsError("duhamel_decomposition: snapshots lack flow maps");

  const double z2 = record.params.background_scale * record.params.background_scale;
  const std::size_t m = record.snapshots.size();
  const ScalarField2D& w0 = record.snapshots.front().field("omega");

  // Per-snapshot integrand sources: z^2 [R, Phi] w and F o Phi.
  std::vector<ScalarField2D> comm_src, forc_src;
  comm_src.reserve(m);
  forc_src.reserve(m);
  for (const Snapshot& snap : record.snapshots) {
    PerturbationState state(snap.field("omega"), snap.field("E"), snap.field("a"));
    comm_src.push_back(z2 * riesz_commutator(state.omega, *snap.flow));
    forc_src.push_back(compose(lorentz_split(state, record.params).remainder, *snap.flow,
                               FlowDirection::forward));
  }

  DuhamelReport rep;
  for (std::size_t j = 0; j < m; ++j) {
    const Snapshot& snap = record.snapshots[j];
    const double tj = snap.t;
    ScalarField2D lead = riesz_semigroup(w0, z2 * tj);
    ScalarField2D comm(w0.grid());
    ScalarField2D forc(w0.grid());
    for (std::size_t i = 1; i <= j; ++i) {
      const double ta = record.snapshots[i - 1].t;
      const double tb = record.snapshots[i].t;
      const double half = 0.5 * (tb - ta);
      comm += half * (riesz_semigroup(comm_src[i - 1], z2 * (tj - ta)) +
                      riesz_semigroup(comm_src[i], z2 * (tj - tb)));
      forc += half * (riesz_semigroup(forc_src[i - 1], z2 * (tj - ta)) +
                      riesz_semigroup(forc_src[i], z2 * (tj - tb)));
    }
    ScalarField2D composed = compose(snap.field("omega"), *snap.flow, FlowDirection::forward);
    ScalarField2D resid = composed - (lead - comm + forc);
    rep.t.push_back(tj);
    rep.leading.push_back(linf(lead));
    rep.commutator.push_back(linf(comm));
    rep.forcing.push_back(linf(forc));
    rep.residual.push_back(linf(resid));
  }
  if (strict && rep.residual.back() > 0.1 * rep.leading.back())
    throw InsufficientSnapshotsError(
        "duhamel_decomposition: snapshot stride too coarse, residual " +
        std::to_string(rep.residual.back()) + " vs leading " +
        std::to_string(rep.leading.back()));
  return rep;
}

InflationReport inflation_report(const std::vector<std::pair<int, const RunRecord*>>& runs,
                                 const std::vector<double>& thresholds) {
  if (runs.size() < 3)
    throw ConfigError("inflation_report: need at least 3 values of N");
  InflationReport rep;
  rep.thresholds = thresholds;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& [N, rec] : runs) {
    rec->validate();
    InflationRow row;
    row.N = N;
    row.linf0 = rec->series.front().linf_omega;
    row.first_crossing.assign(thresholds.size(), -1.0);
    for (const SeriesPoint& p : rec->series) {
      row.max_linf = std::max(row.max_linf, p.linf_omega);
      if (row.linf0 > 0.0)
        for (std::size_t k = 0; k < thresholds.size(); ++k)
          if (row.first_crossing[k] < 0.0 && p.linf_omega / row.linf0 > thresholds[k])
            row.first_crossing[k] = p.t;
    }
    row.ratio = row.linf0 > 0.0 ? row.max_linf / row.linf0 : 0.0;
    const double x = std::log(double(N));
    const double y = std::log(std::max(row.ratio, 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    rep.rows.push_back(std::move(row));
  }
  const double n = double(runs.size());
  const double det = n * sxx - sx * sx;
  rep.fit_slope = det != 0.0 ? (n * sxy - sx * sy) / det : 0.0;
  rep.fit_intercept = (sy - rep.fit_slope * sx) / n;
  return rep;
}

nlohmann::json to_json(const DuhamelReport& report) {
  return {{"t", report.t},
          {"leading", report.leading},
          {"commutator", report.commutator},
          {"forcing", report.forcing},
          {"residual", report.residual}};
}

nlohmann::json to_json(const InflationReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const InflationRow& row : report.rows)
    rows.push_back({{"N", row.N},
                    {"linf0", row.linf0},
                    {"max_linf", row.max_linf},
                    {"ratio", row.ratio},
                    {"first_crossing", row.first_crossing}});
  return {{"thresholds", report.thresholds},
          {"rows", rows},
          {"fit_slope", report.fit_slope},
          {"fit_intercept", report.fit_intercept}};
}

}  // namespace emx
