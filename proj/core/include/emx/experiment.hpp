#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "emx/diagnostics.hpp"
#include "emx/integrators.hpp"
#include "emx/run_record.hpp"

namespace emx {

struct DatumSpec {
  std::string name = "zero";  ///< zero | random | illposed | normal_random
  std::uint64_t seed = 1;
  double amplitude = 1.0;
  double decay = 4.0;   ///< spectral damping exponent of random fields
  int N = 0;            ///< scale count of the ill-posed family
  double lambda = 2.0;
  double epsilon = 0.0;  ///< 0 = default 1/N
  std::string policy = "error";  ///< error | truncate
  double min_cells = 4.0;
  bool scaled_background = false;
};

struct ExperimentConfig {
  std::string model = "perturbation";
  int grid_n = 0;
  Params params;
  Scheme scheme = Scheme::ifrk4;
  StepperConfig time;
  int series_stride = 1;
  DatumSpec datum;
  std::string out_dir;
  std::vector<std::string> checks;  ///< energy | maxwell | local_bound | lorentz | duhamel

  std::vector<int> sweep_N;
  bool ab_twin = false;

  std::vector<double> c_list;
  double t_star = 0.5;

  std::string lemma;  ///< energy|maxwell|commutator|vishik|local_bound|lorentz|family

  /// Strict parse: unknown keys rejected at every level, types checked,
  /// ranges validated. Throws ConfigError.
  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig from_file(const std::string& path);

  /// Full snapshot with every default made explicit.
  nlohmann::json to_json() const;
};

/// Time-step the configured scenario and collect series + snapshots
/// (perturbation runs also carry flow maps). Deterministic for a fixed
/// config.
RunRecord run_experiment(const ExperimentConfig& config);

/// Run the named diagnostic checks against a record.
std::vector<CheckReport> run_checks(const RunRecord& record,
                                    const std::vector<std::string>& names);

/// Exit-code contract: 0 all checks pass, 2 a check failed, 1 operational
/// error (the CLI maps exceptions to 1).
int cmd_run(const ExperimentConfig& config, const std::string& out_dir);
int cmd_sweep(const ExperimentConfig& config, const std::string& out_dir, int threads);
int cmd_lemma(const ExperimentConfig& config, const std::string& out_dir);
int cmd_limit(const ExperimentConfig& config, const std::string& out_dir);

}  // namespace emx
