#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "scatteq/pipeline.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir = "out";
  std::optional<double> tol_phase;
  std::optional<double> tol_bind;
  long seed = 0;  // reserved for randomized property sweeps
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "JSON experiment config")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", args.out_dir, "output directory for artifacts");
  cmd->add_option("--tolerance-phase", args.tol_phase,
                  "phase-shift tolerance in radians (overrides config)");
  cmd->add_option("--tolerance-bind", args.tol_bind,
                  "relative binding-energy tolerance (overrides config)");
  cmd->add_option("--seed", args.seed, "seed for randomized sweeps");
}

scatteq::ExperimentConfig load(const CommonArgs& args) {
  auto cfg = scatteq::ExperimentConfig::from_file(args.config_path);
  if (args.tol_phase) cfg.tolerances.phase = *args.tol_phase;
  if (args.tol_bind) cfg.tolerances.bind = *args.tol_bind;
  return cfg;
}

int guarded(const std::function<scatteq::PipelineResult()>& run) {
  try {
    const scatteq::PipelineResult res = run();
    std::cout << res.report.dump(2) << "\n";
    return res.exit_code;
  } catch (const std::exception& e) {
    const nlohmann::json err = {{"error", e.what()}};
    std::cerr << err.dump(2) << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Momentum-space scattering-equivalence toolkit"};
  app.require_subcommand(1);

  CommonArgs base_args, tr_args, soft_args, three_args, ver_args;
  auto* cmd_base = app.add_subcommand(
      "baseline", "Phase shifts and bound states of the input two-body system");
  add_common(cmd_base, base_args);
  auto* cmd_tr = app.add_subcommand(
      "transform", "Apply the rank-one equivalence at the configured strength "
                   "and certify the scattering observables");
  add_common(cmd_tr, tr_args);
  auto* cmd_soft = app.add_subcommand(
      "soften", "Minimize the high-momentum weight over the transform "
                "strength, then certify at the minimizer");
  add_common(cmd_soft, soft_args);
  auto* cmd_three = app.add_subcommand(
      "three-body", "Build the three-particle transform, report component "
                    "norms and the induced connected force");
  add_common(cmd_three, three_args);
  auto* cmd_ver = app.add_subcommand(
      "verify", "Re-check artifacts a previous run wrote to --out");
  add_common(cmd_ver, ver_args);

  CLI11_PARSE(app, argc, argv);

  using scatteq::run_baseline;
  using scatteq::run_soften;
  using scatteq::run_three_body;
  using scatteq::run_transform;
  using scatteq::run_verify;
  if (cmd_base->parsed())
    return guarded([&] { return run_baseline(load(base_args), base_args.out_dir); });
  if (cmd_tr->parsed())
    return guarded([&] { return run_transform(load(tr_args), tr_args.out_dir); });
  if (cmd_soft->parsed())
    return guarded([&] { return run_soften(load(soft_args), soft_args.out_dir); });
  if (cmd_three->parsed())
    return guarded(
        [&] { return run_three_body(load(three_args), three_args.out_dir); });
  if (cmd_ver->parsed())
    return guarded([&] { return run_verify(load(ver_args), ver_args.out_dir); });
  return 1;
}
