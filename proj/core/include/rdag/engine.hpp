#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rdag/control.hpp"
#include "rdag/dynamics.hpp"
#include "rdag/resilience.hpp"

namespace rdag {

enum class Mode { kContinuous, kDiscrete };

std::string_view to_string(Mode mode);

/// One agent's slice of a step record.
struct AgentSample {
  Vec tau;
  double error = 0.0;   // ||tau_i - tau_L||
  double u_norm = 0.0;  // applied input norm
  double gamma = 1.0;
  std::uint64_t retained_hash = 0;
  int retained_count = 0;
  int omega_count = 0;
  bool active = false;  // nonzero weights this step (normal agents only)
  // Every retained adversary claimed a tau no farther than the leaders'
  // (ground-truth diagnostic; the controller never sees it).
  bool adversaries_in_range = true;
};

struct TraceRecord {
  long long step = 0;
  double time = 0.0;
  bool refresh = false;  // filter sets were refreshed at this step
  std::vector<AgentSample> agents;
};

/// FNV-1a over the retained ids, used to spot filter changes in traces.
std::uint64_t retained_set_hash(const std::vector<VertexId>& retained);

/// Advances `world` by one Euler step of the finite-time law. Filter sets are
/// refreshed at dwell instants; between them only Omega, the weights and the
/// input are recomputed. All agents read the pre-step snapshot. The returned
/// record describes the pre-step state and the inputs applied from it.
/// Throws NumericError if any state becomes non-finite.
TraceRecord step_continuous(World& world, std::vector<FilterState>& filters, const ControlParams& params);

/// Advances `world` by one step of tau[t+1] = tau[t] + u[t], filtering every step.
TraceRecord step_discrete(World& world, std::vector<FilterState>& filters, const ControlParams& params);

struct ConvergenceCriteria {
  double delta = 1e-3;
  int window = 50;
  bool stop_when_converged = true;
};

struct AssertionToggles {
  bool input_bound = true;
  bool convergence = true;
  bool level_order = true;
  bool finite_time_bound = true;     // continuous only
  bool lyapunov_level1 = false;      // continuous only
  bool discrete_contraction = true;  // discrete only
  bool stay_at_formation = true;     // continuous only

  static AssertionToggles none() { return {false, false, false, false, false, false, false}; }
};

struct RunConfig {
  Mode mode = Mode::kContinuous;
  ControlParams params;
  ConvergenceCriteria convergence;
  double t_final = 200.0;      // continuous
  long long max_steps = 10000; // discrete
  int thin = 1;                // keep every thin-th record
  AssertionToggles assertions;

  long long step_limit() const;
  double record_dt() const { return mode == Mode::kContinuous ? params.dt : 1.0; }
};

struct AgentBound {
  VertexId id = 0;
  int level = 0;
  Role role = Role::kNormal;
  double e0 = 0.0;
  std::optional<double> convergence_time;
  double gamma_star = 1.0;  // min gamma over active steps
  int retained_min = 0;     // min |R_i| over active steps
  double max_u = 0.0;
  std::optional<double> bound;        // continuous level-1: T1 bound [s]
  std::optional<double> contraction;  // discrete level-1: c with gamma*
};

struct LevelBound {
  int level = 0;
  int normal_agents = 0;
  std::optional<double> max_convergence_time;  // T_l; empty if some agent never converged
};

struct AssertionResult {
  std::string name;
  bool passed = true;
  std::string detail;
};

struct BoundReport {
  Mode mode = Mode::kContinuous;
  long long steps = 0;
  double final_time = 0.0;
  bool all_converged = false;
  double max_normal_input = 0.0;
  Vec tau_leader;
  std::vector<AgentBound> agents;
  std::vector<LevelBound> levels;
  std::vector<AssertionResult> assertions;

  bool passed() const;
};

struct RunResult {
  std::vector<TraceRecord> trace;           // thinned
  std::vector<std::vector<double>> errors;  // full resolution, errors[agent][step]
  BoundReport report;
  World final_world;
};

/// Steps until the step limit or, when enabled, until every normal agent has
/// stayed within delta for the trailing window; then evaluates the bound report
/// and the enabled assertions.
RunResult run_world(World world, const RunConfig& config);

}  // namespace rdag
