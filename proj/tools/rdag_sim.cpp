#include <CLI11.hpp>

#include <iostream>

#include "commands.hpp"

namespace {

void add_run_overrides(CLI::App* cmd, rdag::cli::RunOverrides& o) {
  cmd->add_option("--mode", o.mode, "Override the dynamics mode")->check(CLI::IsMember({"continuous", "discrete"}));
  cmd->add_option("--t-final", o.t_final, "Override the continuous horizon in seconds")->check(CLI::PositiveNumber);
  cmd->add_option("--max-steps", o.max_steps, "Override the discrete step limit")->check(CLI::PositiveNumber);
  cmd->add_option("--dt", o.dt, "Override the Euler step")->check(CLI::PositiveNumber);
  cmd->add_option("--thin", o.thin, "Keep every k-th step in the trace")->check(CLI::PositiveNumber);
  cmd->add_option("--assert", o.assertions, "all, none, or a comma-separated list of checks");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Resilient formation control on layered directed acyclic graphs"};
  app.require_subcommand(1);

  std::string validate_input;
  auto* validate = app.add_subcommand("validate", "Audit a graph bundle or scenario");
  validate->add_option("input", validate_input, "Graph JSON or scenario JSON")->required()->check(CLI::ExistingFile);

  std::string sim_input;
  rdag::cli::SimulateOptions sim;
  std::optional<std::uint64_t> sim_seed;
  std::string sim_out;
  auto* simulate = app.add_subcommand("simulate", "Run one scenario");
  simulate->add_option("scenario", sim_input, "Scenario JSON")->required()->check(CLI::ExistingFile);
  simulate->add_option("--seed", sim.overrides.seed, "Override the master seed");
  simulate->add_option("--out-dir", sim_out, "Output directory");
  simulate->add_flag("--force", sim.force, "Run even when the topology audits fail");
  add_run_overrides(simulate, sim.overrides);

  std::string batch_input;
  rdag::cli::BatchOptions batch;
  std::string batch_out;
  auto* batch_cmd = app.add_subcommand("batch", "Run a scenario over many derived seeds");
  batch_cmd->add_option("scenario", batch_input, "Scenario JSON")->required()->check(CLI::ExistingFile);
  batch_cmd->add_option("--n-runs", batch.n_runs, "Number of runs")->check(CLI::PositiveNumber);
  batch_cmd->add_option("--seed", batch.seed, "Master seed");
  batch_cmd->add_option("--jobs", batch.jobs, "Parallel workers (0: hardware threads)")->check(CLI::NonNegativeNumber);
  batch_cmd->add_option("--out-dir", batch_out, "Output directory");
  batch_cmd->add_flag("--write-traces", batch.write_traces, "Also write a trace CSV per run");
  batch_cmd->add_flag("--force", batch.force, "Run even when the topology audits fail");
  add_run_overrides(batch_cmd, batch.overrides);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : rdag::cli::kConfigError;
  }

  if (*validate) return rdag::cli::cmd_validate(validate_input, std::cout, std::cerr);
  if (*simulate) {
    if (!sim_out.empty()) sim.out_dir = sim_out;
    return rdag::cli::cmd_simulate(sim_input, sim, std::cout, std::cerr);
  }
  if (!batch_out.empty()) batch.out_dir = batch_out;
  return rdag::cli::cmd_batch(batch_input, batch, std::cout, std::cerr);
}
