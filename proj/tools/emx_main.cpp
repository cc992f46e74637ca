#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"

#include "emx/errors.hpp"
#include "emx/experiment.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  int threads = 1;
  long long seed = -1;
};

void add_common(CLI::App* sub, CommonOpts& opts) {
  sub->add_option("--config", opts.config_path, "experiment config JSON")->required();
  sub->add_option("--out", opts.out_dir, "output directory (overrides output.dir)");
  sub->add_option("--threads", opts.threads, "worker threads for sweeps")
      ->check(CLI::PositiveNumber);
  sub->add_option("--seed", opts.seed, "override the datum seed");
}

emx::ExperimentConfig load(const CommonOpts& opts) {
  emx::ExperimentConfig cfg = emx::ExperimentConfig::from_file(opts.config_path);
  if (!opts.out_dir.empty()) cfg.out_dir = opts.out_dir;
  if (cfg.out_dir.empty()) throw emx::ConfigError("no output directory (--out or output.dir)");
  if (opts.seed >= 0) cfg.datum.seed = static_cast<std::uint64_t>(opts.seed);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Euler-Maxwell torus laboratory"};
  app.require_subcommand(1);

  CommonOpts run_opts, sweep_opts, lemma_opts, limit_opts;
  CLI::App* run = app.add_subcommand("run", "single experiment run");
  add_common(run, run_opts);
  CLI::App* sweep = app.add_subcommand("sweep", "N sweep with inflation table");
  add_common(sweep, sweep_opts);
  CLI::App* lemma = app.add_subcommand("lemma", "minimal scenario for one named check");
  add_common(lemma, lemma_opts);
  CLI::App* limit = app.add_subcommand("limit", "c to 0 comparison against the reduced model");
  add_common(limit, limit_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      emx::ExperimentConfig cfg = load(run_opts);
      return emx::cmd_run(cfg, cfg.out_dir);
    }
    if (sweep->parsed()) {
      emx::ExperimentConfig cfg = load(sweep_opts);
      return emx::cmd_sweep(cfg, cfg.out_dir, sweep_opts.threads);
    }
    if (lemma->parsed()) {
      emx::ExperimentConfig cfg = load(lemma_opts);
      return emx::cmd_lemma(cfg, cfg.out_dir);
    }
    emx::ExperimentConfig cfg = load(limit_opts);
    return emx::cmd_limit(cfg, cfg.out_dir);
  } catch (const emx::UnderResolvedError& e) {
    std::fprintf(stderr, "error: %s (max admissible scales: %d)\n", e.what(),
                 e.max_admissible_scales);
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
