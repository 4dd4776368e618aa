#include "commands.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <future>
#include <nlohmann/json.hpp>
#include <sstream>
#include <thread>

#include "rdag/error.hpp"
#include "rdag/graph_io.hpp"
#include "rdag/random.hpp"
#include "rdag/scenario.hpp"
#include "rdag/trace_io.hpp"

namespace rdag::cli {

namespace {

using nlohmann::json;

constexpr const char* kAssertionNames[] = {"input_bound",     "convergence",          "level_order",
                                           "finite_time_bound", "lyapunov_level1",   "discrete_contraction",
                                           "stay_at_formation"};

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("output", "cannot write " + path.string());
  out << text;
}

json parse_doc(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", fmt::format("scenario is not valid JSON: {}", e.what()));
  }
}

void apply_overrides(json& doc, const RunOverrides& o) {
  if (!doc.is_object()) throw ConfigError("", "scenario must be a JSON object");
  if (o.mode) {
    doc["mode"] = *o.mode;
    if (*o.mode == "discrete") {
      doc.erase("t_final");
      if (doc.contains("params") && doc["params"].is_object()) {
        for (const char* k : {"alpha", "eps_d", "dt", "eps_sing"}) doc["params"].erase(k);
      }
    } else {
      doc.erase("max_steps");
    }
  }
  if (o.seed) doc["seed"] = *o.seed;
  if (o.t_final) doc["t_final"] = *o.t_final;
  if (o.max_steps) doc["max_steps"] = *o.max_steps;
  if (o.dt) doc["params"]["dt"] = *o.dt;
  if (o.thin) doc["output"]["thin"] = *o.thin;
  if (o.assertions) {
    json toggles = json::object();
    const auto& spec = *o.assertions;
    if (spec == "all" || spec == "none") {
      for (const char* name : kAssertionNames) toggles[name] = spec == "all";
    } else {
      for (const char* name : kAssertionNames) toggles[name] = false;
      std::stringstream ss(spec);
      std::string item;
      while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        if (!toggles.contains(item)) throw ConfigError("--assert", fmt::format("unknown assertion '{}'", item));
        toggles[item] = true;
      }
    }
    doc["assertions"] = toggles;
  }
}

Scenario load_with_overrides(const std::filesystem::path& path, const RunOverrides& o) {
  auto doc = parse_doc(read_file(path));
  apply_overrides(doc, o);
  return parse_scenario(doc.dump(), path.parent_path());
}

json error_json(const std::exception& e) {
  json j{{"message", e.what()}};
  if (const auto* c = dynamic_cast<const ConfigError*>(&e)) {
    j["error"] = "config";
    j["field"] = c->field();
  } else if (const auto* a = dynamic_cast<const AuditError*>(&e)) {
    j["error"] = "audit";
    j["audit"] = a->audit();
  } else if (const auto* nm = dynamic_cast<const NumericError*>(&e)) {
    j["error"] = "numeric";
    j["agent"] = nm->agent();
    j["step"] = nm->step();
  } else if (dynamic_cast<const HypothesisError*>(&e)) {
    j["error"] = "hypothesis";
  } else {
    j["error"] = "internal";
  }
  return j;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const NumericError*>(&e)) return kNumericFailure;
  return kConfigError;
}

json report_json(const ValidationReport& r) {
  json v = json::array();
  for (const auto& x : r.violations) {
    v.push_back({{"clause", x.clause}, {"vertex", x.vertex}, {"level", x.level}, {"message", x.message}});
  }
  return {{"ok", r.ok}, {"violations", v}};
}

void write_run_outputs(const Scenario& sc, const RunResult& result, const std::filesystem::path& dir, bool trace) {
  std::filesystem::create_directories(dir);
  if (trace) {
    std::ofstream csv(dir / sc.output.trace, std::ios::binary);
    if (!csv) throw ConfigError("output.trace", "cannot write " + (dir / sc.output.trace).string());
    write_trace_csv(csv, result.trace, result.final_world);
  }
  write_file(dir / sc.output.report, bound_report_json(result.report));
  write_file(dir / sc.output.echo, dump_scenario(sc));
}

std::optional<double> slowest_normal(const BoundReport& r) {
  std::optional<double> worst = 0.0;
  for (const auto& a : r.agents) {
    if (a.role != Role::kNormal) continue;
    if (!a.convergence_time) return std::nullopt;
    worst = std::max(*worst, *a.convergence_time);
  }
  return worst;
}

}  // namespace

std::filesystem::path resolve_out_dir(const std::optional<std::filesystem::path>& flag, const std::string& scenario_dir) {
  if (flag) return *flag;
  if (const char* root = std::getenv("SIM_OUT_DIR"); root && *root) return std::filesystem::path(root) / scenario_dir;
  return scenario_dir;
}

int cmd_simulate(const std::filesystem::path& scenario, const SimulateOptions& options, std::ostream& out,
                 std::ostream& err) {
  try {
    const auto sc = load_with_overrides(scenario, options.overrides);
    const auto result = run(sc, options.force);
    const auto dir = resolve_out_dir(options.out_dir, sc.output.dir);
    write_run_outputs(sc, result, dir, true);

    const auto& rep = result.report;
    out << fmt::format("{}: {} mode, {} agents, {} steps, t = {:.6g}, all converged: {}\n", sc.name,
                       to_string(sc.mode), sc.agents.size(), rep.steps, rep.final_time, rep.all_converged ? "yes" : "no");
    for (const auto& a : rep.assertions) {
      out << fmt::format("  [{}] {}: {}\n", a.passed ? "PASS" : "FAIL", a.name, a.detail);
    }
    out << fmt::format("outputs written to {}\n", dir.string());
    return rep.passed() ? kOk : kAssertionFailure;
  } catch (const Error& e) {
    err << error_json(e).dump() << '\n';
    return exit_code_for(e);
  } catch (const std::filesystem::filesystem_error& e) {
    err << json{{"error", "io"}, {"message", e.what()}}.dump() << '\n';
    return kConfigError;
  }
}

int cmd_batch(const std::filesystem::path& scenario, const BatchOptions& options, std::ostream& out,
              std::ostream& err) {
  if (options.n_runs < 1) {
    err << json{{"error", "config"}, {"field", "n_runs"}, {"message", "n_runs must be >= 1"}}.dump() << '\n';
    return kConfigError;
  }
  json base;
  std::filesystem::path dir;
  try {
    base = parse_doc(read_file(scenario));
    apply_overrides(base, options.overrides);
    const auto probe = parse_scenario(base.dump(), scenario.parent_path());
    dir = resolve_out_dir(options.out_dir, probe.output.dir);
    std::filesystem::create_directories(dir);
  } catch (const Error& e) {
    err << error_json(e).dump() << '\n';
    return kConfigError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << json{{"error", "io"}, {"message", e.what()}}.dump() << '\n';
    return kConfigError;
  }

  struct Outcome {
    std::uint64_t seed = 0;
    std::optional<BoundReport> report;
    std::optional<json> error;
    bool numeric = false;
  };

  auto run_one = [&](int index) {
    Outcome o;
    o.seed = index == 0 ? options.seed : SeedStreams::run_seed(options.seed, static_cast<std::uint64_t>(index));
    try {
      json doc = base;
      doc["seed"] = o.seed;
      const auto sc = parse_scenario(doc.dump(), scenario.parent_path());
      auto result = run(sc, options.force);
      write_run_outputs(sc, result, dir / fmt::format("run_{:04d}", index), options.write_traces);
      o.report = std::move(result.report);
    } catch (const Error& e) {
      o.error = error_json(e);
      o.numeric = dynamic_cast<const NumericError*>(&e) != nullptr;
    } catch (const std::exception& e) {
      o.error = json{{"error", "internal"}, {"message", e.what()}};
    }
    return o;
  };

  const int jobs = std::max(1, options.jobs > 0 ? options.jobs : static_cast<int>(std::thread::hardware_concurrency()));
  std::vector<Outcome> outcomes(static_cast<std::size_t>(options.n_runs));
  for (int start = 0; start < options.n_runs; start += jobs) {
    std::vector<std::future<Outcome>> wave;
    for (int k = start; k < std::min(options.n_runs, start + jobs); ++k) {
      wave.push_back(std::async(std::launch::async, run_one, k));
    }
    for (std::size_t k = 0; k < wave.size(); ++k) outcomes[static_cast<std::size_t>(start) + k] = wave[k].get();
  }

  json runs = json::array();
  std::vector<double> times;
  std::vector<double> steps;
  int failed = 0;
  bool numeric = false;
  for (int k = 0; k < options.n_runs; ++k) {
    const auto& o = outcomes[static_cast<std::size_t>(k)];
    json r{{"index", k}, {"seed", o.seed}};
    if (o.error) {
      r["passed"] = false;
      r["error"] = *o.error;
      ++failed;
      numeric = numeric || o.numeric;
    } else {
      const auto& rep = *o.report;
      const auto worst = slowest_normal(rep);
      r["passed"] = rep.passed();
      r["steps"] = rep.steps;
      r["all_converged"] = rep.all_converged;
      r["max_convergence_time"] = worst ? json(*worst) : json(nullptr);
      json levels = json::array();
      for (const auto& l : rep.levels) {
        levels.push_back(l.max_convergence_time ? json(*l.max_convergence_time) : json(nullptr));
      }
      r["level_times"] = levels;
      json asserts = json::object();
      for (const auto& a : rep.assertions) asserts[a.name] = a.passed;
      r["assertions"] = asserts;
      if (!rep.passed()) ++failed;
      if (worst) times.push_back(*worst);
      steps.push_back(static_cast<double>(rep.steps));
    }
    runs.push_back(std::move(r));
  }

  auto stats = [](const std::vector<double>& xs) -> json {
    if (xs.empty()) return nullptr;
    double sum = 0.0;
    for (double x : xs) sum += x;
    return {{"min", *std::min_element(xs.begin(), xs.end())},
            {"max", *std::max_element(xs.begin(), xs.end())},
            {"mean", sum / static_cast<double>(xs.size())}};
  };

  json summary{{"scenario", scenario.filename().string()},
               {"master_seed", options.seed},
               {"n_runs", options.n_runs},
               {"passed_runs", options.n_runs - failed},
               {"failed_runs", failed},
               {"convergence_time", stats(times)},
               {"steps", stats(steps)},
               {"runs", runs}};
  const auto text = summary.dump(2) + "\n";
  try {
    write_file(dir / "batch_summary.json", text);
  } catch (const Error& e) {
    err << error_json(e).dump() << '\n';
    return kConfigError;
  }
  out << text;
  if (failed == 0) return kOk;
  return numeric ? kNumericFailure : kAssertionFailure;
}

int cmd_validate(const std::filesystem::path& input, std::ostream& out, std::ostream& err) {
  try {
    const auto text = read_file(input);
    const auto doc = parse_doc(text);
    GraphBundle topology;
    std::string kind;
    if (doc.is_object() && doc.contains("in_neighbors")) {
      topology = parse_graph_bundle(text);
      kind = "graph";
    } else {
      topology = parse_scenario(text, input.parent_path()).topology;
      kind = "scenario";
    }
    const auto audit = audit_topology(topology);
    const int required = 3 * topology.placement.F + 1;

    json report{{"input", input.string()},
                {"kind", kind},
                {"n", topology.graph.size()},
                {"F", topology.placement.F},
                {"r", topology.partition.r},
                {"required_in_degree", required},
                {"rdag", report_json(audit.rdag)},
                {"f_local", report_json(audit.f_local)},
                {"in_degree", report_json(audit.in_degree)},
                {"ok", audit.ok()}};
    out << report.dump(2) << '\n';

    auto line = [&](const char* name, const ValidationReport& r) {
      err << fmt::format("{:<10} {}\n", name, r.ok ? "pass" : "FAIL");
      for (const auto& v : r.violations) err << "    " << v.message << '\n';
    };
    err << fmt::format("{} ({} vertices, {} levels, r = {}, F = {}, {} adversaries)\n", input.string(),
                       topology.graph.size(), topology.partition.level_count(), topology.partition.r,
                       topology.placement.F, topology.placement.adversaries.size());
    line("rdag", audit.rdag);
    line("f-local", audit.f_local);
    line(fmt::format("in-degree>={}", required).c_str(), audit.in_degree);
    return audit.ok() ? kOk : kConfigError;
  } catch (const Error& e) {
    err << error_json(e).dump() << '\n';
    return kConfigError;
  }
}

}  // namespace rdag::cli
