#include "emx/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "emx/errors.hpp"
#include "emx/initial_data.hpp"
#include "emx/spectral.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace emx {

namespace {

constexpr double kTimeEps = 1e-12;

// ---- strict config parsing ----

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected a JSON object");
}

void reject_unknown(const json& j, const std::string& where,
                    std::initializer_list<const char*> allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* key : allowed)
      if (it.key() == key) ok = true;
    if (!ok) throw ConfigError(where + ": unknown key '" + it.key() + "'");
  }
}

template <typename T>
T get_or(const json& j, const char* key, T fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + ": bad type for '" + std::string(key) + "'");
  }
}

template <typename T>
T get_req(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing required key '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + ": bad type for '" + std::string(key) + "'");
  }
}

std::string timestamp_utc() {
  const std::time_t now = std::time(nullptr);
  char buf[32];
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::strftime(buf, sizeof buf, "%FT%TZ", &tm);
  return buf;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

VectorField2D average(const VectorField2D& a, const VectorField2D& b) {
  return VectorField2D(0.5 * (a.x1 + b.x1), 0.5 * (a.x2 + b.x2));
}

// ---- datum construction ----

PerturbationState perturbation_datum(const ExperimentConfig& cfg, const FourierGrid& grid,
                                     Params& params) {
  const DatumSpec& d = cfg.datum;
  if (d.name == "zero") return PerturbationState(grid);
  if (d.name == "random") {
    PerturbationState s(grid);
    s.omega = d.amplitude * random_smooth_field(d.seed, d.decay, grid);
    s.E = d.amplitude * random_smooth_field(d.seed + 1, d.decay, grid);
    s.a = d.amplitude * random_smooth_field(d.seed + 2, d.decay, grid);
    s.project_means();
    return s;
  }
  if (d.name == "random_omega") {
    PerturbationState s(grid);
    s.omega = d.amplitude * random_smooth_field(d.seed, d.decay, grid);
    s.omega.project_mean_zero();
    return s;
  }
  if (d.name == "illposed") {
    ScenarioOptions opts;
    opts.lambda = d.lambda;
    opts.epsilon = d.epsilon;
    opts.policy = d.policy == "truncate" ? ScalePolicy::truncate : ScalePolicy::error;
    opts.min_cells = d.min_cells;
    opts.scaled_background = d.scaled_background;
    IllposedDatum id = illposed_datum(d.N, grid, opts);
    params.background_scale = id.background_scale;
    return std::move(id.state);
  }
  throw ConfigError("datum: name '" + d.name + "' not valid for the perturbation model");
}

NormalState normal_datum(const ExperimentConfig& cfg, const FourierGrid& grid) {
  const DatumSpec& d = cfg.datum;
  if (d.name == "zero") return NormalState(grid);
  if (d.name == "normal_random") return normal_random_datum(d.seed, d.amplitude, grid);
  if (d.name == "normal_twin") {
    ScenarioOptions opts;
    opts.lambda = d.lambda;
    opts.epsilon = d.epsilon;
    opts.policy = d.policy == "truncate" ? ScalePolicy::truncate : ScalePolicy::error;
    opts.min_cells = d.min_cells;
    return normal_twin_datum(illposed_datum(d.N, grid, opts));
  }
  throw ConfigError("datum: name '" + d.name + "' not valid for the normal model");
}

ScalarField2D euler_riesz_datum(const ExperimentConfig& cfg, const FourierGrid& grid) {
  const DatumSpec& d = cfg.datum;
  if (d.name == "zero") return ScalarField2D(grid);
  if (d.name == "random" || d.name == "random_omega") {
    ScalarField2D w = d.amplitude * random_smooth_field(d.seed, d.decay, grid);
    w.project_mean_zero();
    return w;
  }
  if (d.name == "illposed") {
    ScenarioOptions opts;
    opts.lambda = d.lambda;
    opts.epsilon = d.epsilon;
    opts.policy = d.policy == "truncate" ? ScalePolicy::truncate : ScalePolicy::error;
    opts.min_cells = d.min_cells;
    IllposedDatum id = illposed_datum(d.N, grid, opts);
    return std::move(id.state.omega);
  }
  throw ConfigError("datum: name '" + d.name + "' not valid for the euler_riesz model");
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  require_object(j, "config");
  reject_unknown(j, "config",
                 {"model", "grid", "params", "scheme", "time", "datum", "output", "checks",
                  "seed", "sweep", "limit", "lemma"});
  ExperimentConfig cfg;
  cfg.model = get_or<std::string>(j, "model", "perturbation", "config");
  if (cfg.model != "perturbation" && cfg.model != "normal" && cfg.model != "euler_riesz")
    throw ConfigError("config: model must be perturbation, normal, or euler_riesz");

  const json& grid = j.contains("grid") ? j.at("grid") : json::object();
  require_object(grid, "grid");
  reject_unknown(grid, "grid", {"n"});
  cfg.grid_n = get_req<int>(grid, "n", "grid");
  if (cfg.grid_n < 8 || cfg.grid_n % 2 != 0)
    throw ConfigError("grid: n must be even and at least 8");

  if (j.contains("params")) {
    const json& p = j.at("params");
    require_object(p, "params");
    reject_unknown(p, "params", {"c", "sigma", "alpha", "beta", "background_scale"});
    cfg.params.c = get_or<double>(p, "c", 1.0, "params");
    cfg.params.sigma = get_or<double>(p, "sigma", 1.0, "params");
    cfg.params.alpha = get_or<double>(p, "alpha", 1.0, "params");
    cfg.params.beta = get_or<double>(p, "beta", 0.0, "params");
    cfg.params.background_scale = get_or<double>(p, "background_scale", 1.0, "params");
  }
  try {
    cfg.params.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  cfg.scheme = scheme_from_string(get_or<std::string>(j, "scheme", "ifrk4", "config"));

  const json& t = j.contains("time") ? j.at("time") : json::object();
  require_object(t, "time");
  reject_unknown(t, "time",
                 {"dt", "cfl", "t_end", "dt_cap", "blowup_guard", "snapshot_stride",
                  "series_stride"});
  cfg.time.dt = get_or<double>(t, "dt", 0.0, "time");
  cfg.time.cfl = get_or<double>(t, "cfl", 0.5, "time");
  cfg.time.t_end = get_req<double>(t, "t_end", "time");
  cfg.time.dt_cap = get_or<double>(t, "dt_cap", 0.02, "time");
  cfg.time.blowup_guard = get_or<double>(t, "blowup_guard", 1e4, "time");
  cfg.time.snapshot_stride = get_or<int>(t, "snapshot_stride", 10, "time");
  cfg.series_stride = get_or<int>(t, "series_stride", 1, "time");
  if (cfg.series_stride < 1) throw ConfigError("time: series_stride must be positive");
  cfg.time.scheme = cfg.scheme;
  try {
    cfg.time.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  const json& d = j.contains("datum") ? j.at("datum") : json::object();
  require_object(d, "datum");
  reject_unknown(d, "datum",
                 {"name", "seed", "amplitude", "decay", "N", "lambda", "epsilon", "policy",
                  "min_cells", "scaled_background"});
  cfg.datum.name = get_or<std::string>(d, "name", "zero", "datum");
  cfg.datum.seed = get_or<std::uint64_t>(d, "seed", 1, "datum");
  cfg.datum.amplitude = get_or<double>(d, "amplitude", 1.0, "datum");
  cfg.datum.decay = get_or<double>(d, "decay", 4.0, "datum");
  cfg.datum.N = get_or<int>(d, "N", 0, "datum");
  cfg.datum.lambda = get_or<double>(d, "lambda", 2.0, "datum");
  cfg.datum.epsilon = get_or<double>(d, "epsilon", 0.0, "datum");
  cfg.datum.policy = get_or<std::string>(d, "policy", "error", "datum");
  if (cfg.datum.policy != "error" && cfg.datum.policy != "truncate")
    throw ConfigError("datum: policy must be error or truncate");
  cfg.datum.min_cells = get_or<double>(d, "min_cells", 4.0, "datum");
  cfg.datum.scaled_background = get_or<bool>(d, "scaled_background", false, "datum");

  if (j.contains("seed")) cfg.datum.seed = get_req<std::uint64_t>(j, "seed", "config");

  if (j.contains("output")) {
    const json& o = j.at("output");
    require_object(o, "output");
    reject_unknown(o, "output", {"dir"});
    cfg.out_dir = get_or<std::string>(o, "dir", "", "output");
  }

  cfg.checks = get_or<std::vector<std::string>>(j, "checks", {}, "config");
  for (const std::string& name : cfg.checks)
    if (name != "energy" && name != "maxwell" && name != "local_bound" &&
        name != "lorentz" && name != "duhamel")
      throw ConfigError("checks: unknown check '" + name + "'");

  if (j.contains("sweep")) {
    const json& s = j.at("sweep");
    require_object(s, "sweep");
    reject_unknown(s, "sweep", {"N", "ab_twin"});
    cfg.sweep_N = get_req<std::vector<int>>(s, "N", "sweep");
    cfg.ab_twin = get_or<bool>(s, "ab_twin", false, "sweep");
  }
  if (j.contains("limit")) {
    const json& l = j.at("limit");
    require_object(l, "limit");
    reject_unknown(l, "limit", {"c_list", "t_star"});
    cfg.c_list = get_req<std::vector<double>>(l, "c_list", "limit");
    cfg.t_star = get_or<double>(l, "t_star", 0.5, "limit");
  }
  if (j.contains("lemma")) {
    const json& l = j.at("lemma");
    require_object(l, "lemma");
    reject_unknown(l, "lemma", {"which"});
    cfg.lemma = get_req<std::string>(l, "which", "lemma");
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return from_json(j);
}

json ExperimentConfig::to_json() const {
  json j = {
      {"model", model},
      {"grid", {{"n", grid_n}}},
      {"params",
       {{"c", params.c},
        {"sigma", params.sigma},
        {"alpha", params.alpha},
        {"beta", params.beta},
        {"background_scale", params.background_scale}}},
      {"scheme", to_string(scheme)},
      {"time",
       {{"dt", time.dt},
        {"cfl", time.cfl},
        {"t_end", time.t_end},
        {"dt_cap", time.dt_cap},
        {"blowup_guard", time.blowup_guard},
        {"snapshot_stride", time.snapshot_stride},
        {"series_stride", series_stride}}},
      {"datum",
       {{"name", datum.name},
        {"seed", datum.seed},
        {"amplitude", datum.amplitude},
        {"decay", datum.decay},
        {"N", datum.N},
        {"lambda", datum.lambda},
        {"epsilon", datum.epsilon},
        {"policy", datum.policy},
        {"min_cells", datum.min_cells},
        {"scaled_background", datum.scaled_background}}},
      {"output", {{"dir", out_dir}}},
      {"checks", checks}};
  if (!sweep_N.empty() || ab_twin) j["sweep"] = {{"N", sweep_N}, {"ab_twin", ab_twin}};
  if (!c_list.empty()) j["limit"] = {{"c_list", c_list}, {"t_star", t_star}};
  if (!lemma.empty()) j["lemma"] = {{"which", lemma}};
  return j;
}

RunRecord run_experiment(const ExperimentConfig& config) {
  const auto wall_start = std::chrono::steady_clock::now();
  FourierGrid grid(config.grid_n);
  Params params = config.params;
  StepperConfig scfg = config.time;
  scfg.scheme = config.scheme;

  RunRecord record;
  record.model = config.model;
  record.grid_n = config.grid_n;
  record.partition_profile = DyadicPartition::profile_id();
  record.dt_nominal = scfg.dt;
  record.started_at = timestamp_utc();

  const int series_stride = config.series_stride;
  const int snap_stride = scfg.snapshot_stride;

  if (config.model == "perturbation") {
    PerturbationState state = perturbation_datum(config, grid, params);
    PerturbationStepper stepper(grid, params, scfg);
    FlowMap flow(grid);
    VectorField2D u_prev = state.velocity();

    auto snapshot = [&](double t) {
      Snapshot s;
      s.t = t;
      s.fields.emplace_back("omega", state.omega);
      s.fields.emplace_back("E", state.E);
      s.fields.emplace_back("a", state.a);
      s.flow = flow;
      record.snapshots.push_back(std::move(s));
    };
    record.series.push_back(measure_perturbation(state, params, 0.0));
    snapshot(0.0);

    double t = 0.0;
    long step = 0;
    while (t < scfg.t_end - kTimeEps) {
      double dt = scfg.dt > 0.0 ? scfg.dt : stepper.stable_dt(state);
      dt = std::min(dt, scfg.t_end - t);
      stepper.step(state, t, dt);
      VectorField2D u_new = state.velocity();
      flow = advance_flow(flow, u_prev, average(u_prev, u_new), u_new, dt);
      u_prev = std::move(u_new);
      t += dt;
      ++step;
      const bool last = t >= scfg.t_end - kTimeEps;
      if (step % series_stride == 0 || last) {
        SeriesPoint p = measure_perturbation(state, params, t);
        accumulate_integrals(p, record.series.back());
        record.series.push_back(p);
      }
      if (step % snap_stride == 0 || last) snapshot(t);
    }
  } else if (config.model == "normal") {
    NormalState state = normal_datum(config, grid);
    NormalStepper stepper(grid, params, scfg);

    auto snapshot = [&](double t) {
      Snapshot s;
      s.t = t;
      s.fields.emplace_back("omega", state.omega);
      s.fields.emplace_back("E1", state.E1);
      s.fields.emplace_back("E2", state.E2);
      s.fields.emplace_back("b3", state.b3);
      record.snapshots.push_back(std::move(s));
    };
    record.series.push_back(measure_normal(state, params, 0.0));
    snapshot(0.0);

    double t = 0.0;
    long step = 0;
    while (t < scfg.t_end - kTimeEps) {
      double dt = scfg.dt > 0.0 ? scfg.dt : stepper.stable_dt(state);
      dt = std::min(dt, scfg.t_end - t);
      stepper.step(state, t, dt);
      t += dt;
      ++step;
      const bool last = t >= scfg.t_end - kTimeEps;
      if (step % series_stride == 0 || last) {
        SeriesPoint p = measure_normal(state, params, t);
        accumulate_integrals(p, record.series.back());
        record.series.push_back(p);
      }
      if (step % snap_stride == 0 || last) snapshot(t);
    }
  } else {
    ScalarField2D omega = euler_riesz_datum(config, grid);
    EulerRieszStepper stepper(grid, params, scfg);

    auto snapshot = [&](double t) {
      Snapshot s;
      s.t = t;
      s.fields.emplace_back("omega", omega);
      record.snapshots.push_back(std::move(s));
    };
    record.series.push_back(measure_euler_riesz(omega, params, 0.0));
    snapshot(0.0);

    double t = 0.0;
    long step = 0;
    while (t < scfg.t_end - kTimeEps) {
      double dt = scfg.dt > 0.0 ? scfg.dt : stepper.stable_dt(omega);
      dt = std::min(dt, scfg.t_end - t);
      stepper.step(omega, t, dt);
      t += dt;
      ++step;
      const bool last = t >= scfg.t_end - kTimeEps;
      if (step % series_stride == 0 || last) {
        SeriesPoint p = measure_euler_riesz(omega, params, t);
        accumulate_integrals(p, record.series.back());
        record.series.push_back(p);
      }
      if (step % snap_stride == 0 || last) snapshot(t);
    }
  }

  ExperimentConfig snapshot_cfg = config;
  snapshot_cfg.params = params;  // includes any datum-driven background scale
  record.config = snapshot_cfg.to_json();
  record.params = params;
  record.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
  return record;
}

std::vector<CheckReport> run_checks(const RunRecord& record,
                                    const std::vector<std::string>& names) {
  std::vector<CheckReport> reports;
  for (const std::string& name : names) {
    if (name == "energy") {
      reports.push_back(energy_check(record));
    } else if (name == "maxwell") {
      reports.push_back(maxwell_estimate_check(record));
    } else if (name == "local_bound") {
      reports.push_back(local_bound_check(record));
    } else if (name == "lorentz") {
      reports.push_back(lorentz_remainder_check(record));
    } else if (name == "duhamel") {
      CheckReport r;
      r.name = "duhamel";
      r.anchor = "section-5-duhamel-decomposition";
      DuhamelReport dr = duhamel_decomposition(record, false);
      const double lead = dr.leading.back();
      const double resid = dr.residual.back();
      r.pass = lead > 0.0 && resid <= 0.1 * lead;
      r.details = {{"series", to_json(dr)},
                   {"final_leading", lead},
                   {"final_residual", resid},
                   {"residual_fraction", lead > 0.0 ? resid / lead : 0.0}};
      reports.push_back(std::move(r));
    } else {
      throw ConfigError("unknown check '" + name + "'");
    }
  }
  return reports;
}

int cmd_run(const ExperimentConfig& config, const std::string& out_dir) {
  RunRecord record = run_experiment(config);
  std::vector<CheckReport> checks = run_checks(record, config.checks);
  write_run_dir(out_dir, record, checks);
  for (const CheckReport& c : checks)
    if (!c.pass) return 2;
  return 0;
}

int cmd_sweep(const ExperimentConfig& config, const std::string& out_dir, int threads) {
  if (config.sweep_N.empty()) throw ConfigError("sweep: N list must not be empty");
  fs::create_directories(out_dir);

  struct Job {
    ExperimentConfig cfg;
    std::string dir;
    int N;
    bool twin;
  };
  std::vector<Job> jobs;
  for (int N : config.sweep_N) {
    char tag[32];
    std::snprintf(tag, sizeof tag, "N_%03d", N);
    ExperimentConfig run_cfg = config;
    run_cfg.sweep_N.clear();
    run_cfg.ab_twin = false;
    run_cfg.datum.name = "illposed";
    run_cfg.datum.N = N;
    jobs.push_back({run_cfg, (fs::path(out_dir) / tag).string(), N, false});
    if (config.ab_twin) {
      ExperimentConfig twin_cfg = run_cfg;
      twin_cfg.model = "normal";
      twin_cfg.datum.name = "normal_twin";
      // duhamel/maxwell checks are perturbation-side diagnostics
      twin_cfg.checks = {"energy"};
      jobs.push_back(
          {twin_cfg, (fs::path(out_dir) / (std::string(tag) + "_normal")).string(), N, true});
    }
  }

  struct Outcome {
    bool ok = false;
    bool checks_pass = true;
    std::string error;
    RunRecord record;  // snapshots dropped after persisting
  };
  std::vector<Outcome> outcomes(jobs.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      Outcome& out = outcomes[i];
      try {
        RunRecord record = run_experiment(jobs[i].cfg);
        std::vector<CheckReport> checks = run_checks(record, jobs[i].cfg.checks);
        write_run_dir(jobs[i].dir, record, checks);
        for (const CheckReport& c : checks)
          if (!c.pass) out.checks_pass = false;
        record.snapshots.clear();
        out.record = std::move(record);
        out.ok = true;
      } catch (const std::exception& e) {
        out.error = e.what();
      }
    }
  };
  const int nthreads = std::max(1, std::min<int>(threads, int(jobs.size())));
  std::vector<std::thread> pool;
  for (int i = 1; i < nthreads; ++i) pool.emplace_back(worker);
  worker();
  for (std::thread& th : pool) th.join();

  std::vector<std::pair<int, const RunRecord*>> main_runs;
  json summary = json::array();
  bool any_fail_op = false, any_fail_check = false;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    summary.push_back({{"N", jobs[i].N},
                       {"twin", jobs[i].twin},
                       {"dir", jobs[i].dir},
                       {"ok", outcomes[i].ok},
                       {"checks_pass", outcomes[i].checks_pass},
                       {"error", outcomes[i].error}});
    if (!outcomes[i].ok) any_fail_op = true;
    if (!outcomes[i].checks_pass) any_fail_check = true;
    if (outcomes[i].ok && !jobs[i].twin)
      main_runs.emplace_back(jobs[i].N, &outcomes[i].record);
  }

  json sweep_json = {{"runs", summary}};
  if (main_runs.size() >= 3) {
    InflationReport rep = inflation_report(main_runs);
    sweep_json["inflation"] = to_json(rep);
    std::string csv = "N,linf0,max_linf,ratio";
    for (double th : rep.thresholds) csv += ",first_over_" + fmt(th);
    csv += '\n';
    for (const InflationRow& row : rep.rows) {
      csv += std::to_string(row.N) + ',' + fmt(row.linf0) + ',' + fmt(row.max_linf) + ',' +
             fmt(row.ratio);
      for (double tc : row.first_crossing) csv += ',' + fmt(tc);
      csv += '\n';
    }
    write_text(fs::path(out_dir) / "inflation.csv", csv);
  }
  if (config.ab_twin) {
    json twins = json::array();
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      if (!jobs[i].twin || !outcomes[i].ok) continue;
      const auto& series = outcomes[i].record.series;
      const double l0 = series.front().linf_omega;
      double lmax = 0.0;
      for (const SeriesPoint& p : series) lmax = std::max(lmax, p.linf_omega);
      twins.push_back(
          {{"N", jobs[i].N}, {"linf0", l0}, {"max_linf", lmax}, {"ratio", l0 > 0.0 ? lmax / l0 : 0.0}});
    }
    sweep_json["normal_twins"] = twins;
  }
  write_text(fs::path(out_dir) / "inflation.json", sweep_json.dump(2) + "\n");

  if (any_fail_op) return 1;
  return any_fail_check ? 2 : 0;
}

namespace {

FlowMap flow_from_frozen(const VectorField2D& u, double t_total, int steps) {
  FlowMap fm(u.grid());
  const double dt = t_total / steps;
  for (int i = 0; i < steps; ++i) fm = advance_flow(fm, u, dt);
  return fm;
}

int lemma_suite_commutator(const ExperimentConfig& config, const std::string& out_dir,
                           bool vishik) {
  FourierGrid grid(config.grid_n);
  ScalarField2D test_field = random_smooth_field(7, 4.0, grid);
  json rows = json::array();
  double worst = 0.0;

  auto add = [&](const std::string& label, const FlowMap& fm) {
    const double ratio = vishik ? vishik_ratio(test_field, fm)
                                : commutator_ratio(test_field, fm, 2.0);
    worst = std::max(worst, ratio);
    rows.push_back({{"flow", label},
                    {"ratio", ratio},
                    {"displacement", displacement_seminorm(fm.d_plus)}});
  };

  for (double amp : {0.25, 0.5, 1.0}) {
    VectorField2D shear(grid);
    ScalarField2D u1(grid);
    auto p = u1.phys_mut();
    for (int i = 0; i < grid.n(); ++i)
      for (int j = 0; j < grid.n(); ++j)
        p[std::size_t(i) * grid.n() + j] = amp * std::sin(grid.x(j));
    shear = VectorField2D(u1, ScalarField2D(grid), true);
    add("shear_amp_" + fmt(amp), flow_from_frozen(shear, 0.5, 25));
  }
  for (std::uint64_t seed : {11, 12, 13, 14}) {
    ScalarField2D w = 0.5 * random_smooth_field(seed, 4.0, grid);
    add("frozen_random_" + std::to_string(seed), flow_from_frozen(biot_savart(w), 0.5, 25));
  }
  // Trajectory flows of short nonlinear runs.
  for (int N : {2, 3, 4}) {
    ExperimentConfig run_cfg = config;
    run_cfg.model = "perturbation";
    run_cfg.datum.name = "illposed";
    run_cfg.datum.N = N;
    run_cfg.datum.min_cells = 1.0;
    run_cfg.datum.policy = "truncate";
    run_cfg.time.t_end = 0.25;
    run_cfg.series_stride = 1000000;
    run_cfg.checks.clear();
    RunRecord rec = run_experiment(run_cfg);
    add("trajectory_N_" + std::to_string(N), *rec.snapshots.back().flow);
  }

  CheckReport r;
  r.name = vishik ? "vishik" : "commutator";
  r.anchor = vishik ? "lemma-2.3-flow-composition" : "lemma-2.2-riesz-commutator";
  r.pass = std::isfinite(worst) && worst > 0.0;
  r.details = {{"suite", rows}, {"bound_constant", worst}, {"grid_n", config.grid_n}};
  fs::create_directories(out_dir);
  write_text(fs::path(out_dir) / ("lemma_" + r.name + ".json"), to_json(r).dump(2) + "\n");
  return r.pass ? 0 : 2;
}

int lemma_family(const ExperimentConfig& config, const std::string& out_dir) {
  FourierGrid grid(config.grid_n);
  const DatumSpec& d = config.datum;
  const int N = d.N > 0 ? d.N : 4;
  const ScalePolicy policy =
      d.policy == "truncate" ? ScalePolicy::truncate : ScalePolicy::error;
  json rows = json::array();
  double sup_min = std::numeric_limits<double>::infinity(), sup_max = 0.0;
  for (int n = 1; n <= N; ++n) {
    FamilyField f = build_f_family(n, d.lambda, grid, policy, d.min_cells);
    const double sup = lebesgue_norm(f.field, BesovSpec::infinity());
    sup_min = std::min(sup_min, sup);
    sup_max = std::max(sup_max, sup);
    ScalarField2D rf = riesz(f.field);
    rows.push_back({{"N", n},
                    {"effective_scales", f.effective_scales},
                    {"sup", sup},
                    {"l2", f.field.l2_norm()},
                    {"besov1", besov_norm(f.field, BesovSpec::B121())},
                    {"riesz_sup", lebesgue_norm(rf, BesovSpec::infinity())},
                    {"riesz_origin", rf.phys()[0]}});
  }
  CheckReport r;
  r.name = "family";
  r.anchor = "lemma-5.1-family";
  r.pass = sup_max - sup_min <= 1e-10 * std::max(1.0, sup_max);
  r.details = {{"rows", rows},
               {"max_admissible_scales", max_admissible_scales(grid, d.lambda, d.min_cells)},
               {"grid_n", config.grid_n}};
  fs::create_directories(out_dir);
  write_text(fs::path(out_dir) / "lemma_family.json", to_json(r).dump(2) + "\n");
  return r.pass ? 0 : 2;
}

}  // namespace

int cmd_lemma(const ExperimentConfig& config, const std::string& out_dir) {
  const std::string& which = config.lemma;
  if (which.empty()) throw ConfigError("lemma: missing 'which'");
  if (which == "commutator") return lemma_suite_commutator(config, out_dir, false);
  if (which == "vishik") return lemma_suite_commutator(config, out_dir, true);
  if (which == "family") return lemma_family(config, out_dir);

  std::string check;
  if (which == "energy")
    check = "energy";
  else if (which == "maxwell")
    check = "maxwell";
  else if (which == "local_bound")
    check = "local_bound";
  else if (which == "lorentz")
    check = "lorentz";
  else
    throw ConfigError("lemma: unknown check '" + which + "'");

  ExperimentConfig run_cfg = config;
  run_cfg.checks = {check};
  if (run_cfg.datum.name == "zero" && which != "energy") run_cfg.datum.name = "random";
  return cmd_run(run_cfg, out_dir);
}

int cmd_limit(const ExperimentConfig& config, const std::string& out_dir) {
  if (config.c_list.empty()) throw ConfigError("limit: c_list must not be empty");
  fs::create_directories(out_dir);

  ExperimentConfig base = config;
  base.time.t_end = config.t_star;
  base.series_stride = 1000000;
  base.time.snapshot_stride = 1000000;
  base.checks.clear();
  if (base.datum.name == "zero") {
    // still a valid (trivial) limit study
  } else if (base.datum.name == "random") {
    base.datum.name = "random_omega";  // b0 = 0 required
  }

  ExperimentConfig er_cfg = base;
  er_cfg.model = "euler_riesz";
  er_cfg.params.alpha = 1.0;
  er_cfg.params.beta = 0.0;
  RunRecord er = run_experiment(er_cfg);
  const ScalarField2D& w_er = er.snapshots.back().field("omega");

  json rows = json::array();
  std::string csv = "c,discrepancy_linf\n";
  std::vector<double> disc;
  for (double c : config.c_list) {
    ExperimentConfig em_cfg = base;
    em_cfg.model = "perturbation";
    em_cfg.params.c = c;
    RunRecord em = run_experiment(em_cfg);
    const ScalarField2D& w_em = em.snapshots.back().field("omega");
    const double dval = lebesgue_norm(w_em - w_er, BesovSpec::infinity());
    disc.push_back(dval);
    rows.push_back({{"c", c}, {"discrepancy_linf", dval}});
    csv += fmt(c) + ',' + fmt(dval) + '\n';
  }

  // Monotone in c when the list is sorted decreasingly in c.
  std::vector<std::pair<double, double>> sorted;
  for (std::size_t i = 0; i < disc.size(); ++i) sorted.emplace_back(config.c_list[i], disc[i]);
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  bool monotone = true;
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i].second > sorted[i - 1].second + 1e-15) monotone = false;

  json out = {{"t_star", config.t_star}, {"rows", rows}, {"monotone_decreasing", monotone}};
  write_text(fs::path(out_dir) / "limit.json", out.dump(2) + "\n");
  write_text(fs::path(out_dir) / "limit.csv", csv);
  return monotone ? 0 : 2;
}

}  // namespace emx
