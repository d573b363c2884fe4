#include <CLI11.hpp>

#include <cstdio>
#include <string>
#include <vector>

#include "adp/errors.hpp"
#include "adp/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRejected = 1;
constexpr int kExitIo = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitUsage = 64;
constexpr int kExitInternal = 70;

struct CommonOpts {
  std::string config_path;
  bool builtin_example = false;
  std::string out_dir;
};

void add_common(CLI::App* sub, CommonOpts* opts, bool with_out) {
  auto* config = sub->add_option("--config", opts->config_path, "experiment config JSON");
  auto* builtin = sub->add_flag("--builtin-example", opts->builtin_example,
                                "use the built-in benchmark with its published defaults");
  config->excludes(builtin);
  builtin->excludes(config);
  if (with_out)
    sub->add_option("--out", opts->out_dir, "output directory (overrides the config)");
}

adp::ExperimentConfig make_config(const CommonOpts& opts) {
  if (!opts.builtin_example && opts.config_path.empty())
    throw adp::UsageError("pass --config <file> or --builtin-example");
  adp::ExperimentConfig cfg = opts.builtin_example ? adp::default_builtin_config()
                                                   : adp::load_config(opts.config_path);
  if (!opts.out_dir.empty()) cfg.out_dir = opts.out_dir;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hybrid actor-critic approximate dynamic programming simulator"};
  app.require_subcommand(1);

  CommonOpts certify_opts;
  CLI::App* certify = app.add_subcommand(
      "certify-data", "compute the data-richness certificate for a recorded dataset");
  add_common(certify, &certify_opts, false);

  CommonOpts validate_opts;
  CLI::App* validate = app.add_subcommand(
      "validate", "check the critic tuning against the certified excitation level");
  add_common(validate, &validate_opts, false);

  CommonOpts run_opts;
  std::string run_mode;
  bool force = false;
  CLI::App* run = app.add_subcommand("run", "simulate the closed loop and write trajectories");
  add_common(run, &run_opts, true);
  run->add_option("--mode", run_mode,
                  "momentum-restart, gradient-baseline, or both (overrides the config)")
      ->check(CLI::IsMember({"momentum-restart", "gradient-baseline", "both"}));
  run->add_flag("--force", force, "run even when tuning validation fails");

  CommonOpts sweep_opts;
  std::string sweep_param;
  std::vector<double> sweep_values;
  CLI::App* sweep =
      app.add_subcommand("sweep", "run the momentum loop across one parameter's values");
  add_common(sweep, &sweep_opts, true);
  sweep->add_option("--param", sweep_param, "T, k_c, rho_d, rho_i, or lambda");
  sweep->add_option("--values", sweep_values, "comma-separated values")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (certify->parsed()) {
      const adp::CertifyReport report = adp::cmd_certify_data(make_config(certify_opts));
      std::fputs(report.json.c_str(), stdout);
      return report.certificate.rich ? kExitOk : kExitRejected;
    }
    if (validate->parsed()) {
      const adp::ValidateReport report = adp::cmd_validate(make_config(validate_opts));
      std::fputs(report.json.c_str(), stdout);
      return report.verdict.ok ? kExitOk : kExitRejected;
    }
    if (run->parsed()) {
      adp::ExperimentConfig cfg = make_config(run_opts);
      if (run_mode == "momentum-restart") cfg.mode = adp::RunMode::Momentum;
      else if (run_mode == "gradient-baseline") cfg.mode = adp::RunMode::Baseline;
      else if (run_mode == "both") cfg.mode = adp::RunMode::Both;
      const adp::RunSummary summary = adp::cmd_run(cfg, force);
      std::fputs(summary.json.c_str(), stdout);
      return kExitOk;
    }
    if (sweep->parsed()) {
      adp::ExperimentConfig cfg = make_config(sweep_opts);
      adp::SweepSpec spec;
      if (!sweep_param.empty() || !sweep_values.empty()) {
        spec.param = sweep_param;
        spec.values = sweep_values;
      } else if (cfg.sweep) {
        spec = *cfg.sweep;
      } else {
        throw adp::UsageError("sweep needs --param/--values or a sweep block in the config");
      }
      const adp::SweepResult result = adp::cmd_sweep(cfg, spec);
      std::printf("wrote %s (%zu rows)\n", result.csv_path.c_str(), result.rows.size());
      return kExitOk;
    }
    throw adp::UsageError("no subcommand given");
  } catch (const adp::UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kExitUsage;
  } catch (const adp::IoError& e) {
    std::fprintf(stderr, "io error: %s: %s\n", e.path().c_str(), e.what());
    return kExitIo;
  } catch (const adp::NumericalError& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return kExitNumerical;
  } catch (const adp::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRejected;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return kExitInternal;
  }
}
