#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rdag/dynamics.hpp"
#include "rdag/engine.hpp"
#include "rdag/graph_io.hpp"

namespace rdag {

/// Fully resolved initial condition of one agent.
struct AgentSpec {
  VertexId id = 0;
  int level = 0;
  Role role = Role::kNormal;
  Vec p0;
  Vec xi;
  std::optional<AdversaryStrategy> strategy;
};

struct OutputSpec {
  std::string dir = "out";
  std::string trace = "trace.csv";
  std::string report = "bound_report.json";
  std::string echo = "effective_config.json";
  int thin = 1;
};

/// A validated experiment. Every generator (layered graph, adversary
/// placement, strategy cycle, random initial tau, circle formation) has
/// already been expanded, so the struct is exactly what runs.
struct Scenario {
  std::string name;
  Mode mode = Mode::kContinuous;
  int dimension = 2;
  std::uint64_t seed = 0;
  double t_final = 200.0;       // continuous only
  long long max_steps = 10000;  // discrete only
  ControlParams params;
  ConvergenceCriteria convergence;
  GraphBundle topology;  // placement.F mirrors params.F
  AdversaryMode adversary_mode = AdversaryMode::kCommunication;
  double leader_tolerance = 1e-9;
  std::vector<AgentSpec> agents;  // indexed by id
  AssertionToggles assertions;
  OutputSpec output;

  RunConfig run_config() const;
};

/// Parses and validates a scenario document. Relative graph file references
/// resolve against `base_dir`. Throws ConfigError naming the field (parse
/// errors carry the line and column).
Scenario parse_scenario(std::string_view text, const std::filesystem::path& base_dir = {});

Scenario load_scenario(const std::filesystem::path& path);

/// Effective configuration with every default materialized. Parsing the
/// result yields a scenario that runs bit-identically.
std::string dump_scenario(const Scenario& scenario);

/// Builds the initial world; throws ConfigError when the behaving leaders disagree on tau.
World build_world(const Scenario& scenario);

struct AuditSummary {
  ValidationReport rdag;
  ValidationReport f_local;
  ValidationReport in_degree;  // every non-leader vertex has >= 3F + 1 in-neighbors

  bool ok() const { return rdag.ok && f_local.ok && in_degree.ok; }
};

AuditSummary audit_topology(const GraphBundle& topology);

/// Audits (unless `force`), builds the world and runs it.
/// Throws AuditError naming the first failed audit.
RunResult run(const Scenario& scenario, bool force = false);

}  // namespace rdag
