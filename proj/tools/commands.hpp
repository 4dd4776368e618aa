#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

namespace rdag::cli {

enum ExitCode : int {
  kOk = 0,
  kAssertionFailure = 1,
  kConfigError = 2,
  kNumericFailure = 3,
};

struct RunOverrides {
  std::optional<std::string> mode;  // "continuous" | "discrete"
  std::optional<std::uint64_t> seed;
  std::optional<double> t_final;
  std::optional<long long> max_steps;
  std::optional<double> dt;
  std::optional<int> thin;
  std::optional<std::string> assertions;  // "all", "none" or a comma-separated list
};

struct SimulateOptions {
  RunOverrides overrides;
  std::optional<std::filesystem::path> out_dir;
  bool force = false;
};

struct BatchOptions {
  RunOverrides overrides;
  int n_runs = 1;
  std::uint64_t seed = 0;
  std::optional<std::filesystem::path> out_dir;
  bool force = false;
  bool write_traces = false;
  int jobs = 0;  // 0: one worker per hardware thread
};

/// Writes trace CSV, bound report and effective config; prints one line per assertion.
int cmd_simulate(const std::filesystem::path& scenario, const SimulateOptions& options, std::ostream& out,
                 std::ostream& err);

/// Runs n_runs seeds (run 0 uses the master seed, run k > 0 a derived one) and
/// prints the aggregate JSON, also saved as batch_summary.json.
int cmd_batch(const std::filesystem::path& scenario, const BatchOptions& options, std::ostream& out,
              std::ostream& err);

/// Audits a graph bundle or scenario. JSON report on `out`, readable summary on `err`.
int cmd_validate(const std::filesystem::path& input, std::ostream& out, std::ostream& err);

/// --out-dir if given, else $SIM_OUT_DIR joined with the scenario's output dir, else the output dir itself.
std::filesystem::path resolve_out_dir(const std::optional<std::filesystem::path>& flag, const std::string& scenario_dir);

}  // namespace rdag::cli
