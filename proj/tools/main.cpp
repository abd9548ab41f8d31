#include <string>

#include <CLI11.hpp>

#include "detcon/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"deterministic simulator for distributed event-triggered average consensus"};
  app.require_subcommand(1);

  detcon::cli::RunOptions run_opts;
  std::uint64_t seed_override = 0;
  double horizon_override = 0.0;

  CLI::App* run = app.add_subcommand("run", "simulate a scenario and write results");
  run->add_option("scenario", run_opts.scenario_path, "scenario JSON file")->required();
  run->add_option("--out", run_opts.out_dir, "output directory")->required();
  run->add_flag("--force", run_opts.force, "overwrite prior results");
  CLI::Option* run_seed = run->add_option("--seed", seed_override, "override rng_seed");
  CLI::Option* run_horizon =
      run->add_option("--horizon", horizon_override, "override the horizon");

  detcon::cli::VerifyOptions verify_opts;
  CLI::App* verify = app.add_subcommand("verify", "run the invariant check suite");
  verify->add_option("scenario", verify_opts.scenario_path, "scenario JSON file")->required();
  std::string from_dir;
  CLI::Option* verify_from = verify->add_option(
      "--from", from_dir, "check previously written outputs instead of re-running");
  verify->add_option("--oracle-cases", verify_opts.oracle_cases,
                     "random scenarios for the fixed-step cross-check");
  CLI::Option* verify_seed = verify->add_option("--seed", seed_override, "override rng_seed");

  detcon::cli::SweepOptions sweep_opts;
  std::string grid_spec = "0.1:0.1:0.9";
  CLI::App* sweep = app.add_subcommand("sweep", "sweep sigma and collect statistics");
  sweep->add_option("scenario", sweep_opts.scenario_path, "scenario JSON file")->required();
  sweep->add_option("--out", sweep_opts.out_dir, "output directory")->required();
  sweep->add_flag("--force", sweep_opts.force, "overwrite prior results");
  sweep->add_option("--sigma-grid", grid_spec, "start:step:stop or comma list");
  sweep->add_option("--seeds", sweep_opts.seeds, "seeds for the noise statistics check");
  CLI::Option* sweep_seed = sweep->add_option("--seed", seed_override, "override rng_seed");
  CLI::Option* sweep_horizon =
      sweep->add_option("--horizon", horizon_override, "override the horizon");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return detcon::cli::kUsageError;
  }

  try {
    if (run->parsed()) {
      if (*run_seed) run_opts.seed = seed_override;
      if (*run_horizon) run_opts.horizon = horizon_override;
      return detcon::cli::cmd_run(run_opts);
    }
    if (verify->parsed()) {
      if (*verify_from) verify_opts.from_dir = from_dir;
      if (*verify_seed) verify_opts.seed = seed_override;
      return detcon::cli::cmd_verify(verify_opts);
    }
    if (*sweep_seed) sweep_opts.seed = seed_override;
    if (*sweep_horizon) sweep_opts.horizon = horizon_override;
    sweep_opts.sigma_grid = detcon::cli::parse_sigma_grid(grid_spec);
    return detcon::cli::cmd_sweep(sweep_opts);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return detcon::cli::kUsageError;
  }
}
