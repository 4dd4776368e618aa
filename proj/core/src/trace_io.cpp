#include "rdag/trace_io.hpp"

#include <fmt/format.h>

#include <iterator>
#include <nlohmann/json.hpp>

namespace rdag {

namespace {

using nlohmann::json;

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

std::string trace_csv_header(int dimension) {
  std::string h = "step,time,agent_id,level,role";
  for (int k = 0; k < dimension; ++k) h += fmt::format(",tau_{}", k);
  h += ",err,u_norm,gamma,retained_hash";
  return h;
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& trace, const World& world) {
  out << trace_csv_header(world.dimension) << '\n';
  fmt::memory_buffer buf;
  for (const auto& rec : trace) {
    for (std::size_t i = 0; i < rec.agents.size(); ++i) {
      const auto& s = rec.agents[i];
      const auto& a = world.agents[i];
      buf.clear();
      auto it = std::back_inserter(buf);
      fmt::format_to(it, "{},{:.17g},{},{},{}", rec.step, rec.time, a.id, a.level, to_string(a.role));
      for (Eigen::Index k = 0; k < s.tau.size(); ++k) fmt::format_to(it, ",{:.17g}", s.tau[k]);
      fmt::format_to(it, ",{:.17g},{:.17g},{:.17g},{:016x}\n", s.error, s.u_norm, s.gamma, s.retained_hash);
      out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    }
  }
}

std::string bound_report_json(const BoundReport& report) {
  json doc;
  doc["mode"] = std::string(to_string(report.mode));
  doc["steps"] = report.steps;
  doc["final_time"] = report.final_time;
  doc["all_converged"] = report.all_converged;
  doc["max_normal_input"] = report.max_normal_input;
  doc["tau_leader"] = to_std(report.tau_leader);
  doc["passed"] = report.passed();

  json agents = json::array();
  for (const auto& a : report.agents) {
    agents.push_back({{"id", a.id},
                      {"level", a.level},
                      {"role", std::string(to_string(a.role))},
                      {"e0", a.e0},
                      {"convergence_time", optional_json(a.convergence_time)},
                      {"gamma_star", a.gamma_star},
                      {"retained_min", a.retained_min},
                      {"max_u", a.max_u},
                      {"t1_bound", optional_json(a.bound)},
                      {"contraction_factor", optional_json(a.contraction)}});
  }
  doc["agents"] = std::move(agents);

  json levels = json::array();
  for (const auto& l : report.levels) {
    levels.push_back({{"level", l.level},
                      {"normal_agents", l.normal_agents},
                      {"max_convergence_time", optional_json(l.max_convergence_time)}});
  }
  doc["levels"] = std::move(levels);

  json assertions = json::array();
  for (const auto& a : report.assertions) {
    assertions.push_back({{"name", a.name}, {"passed", a.passed}, {"detail", a.detail}});
  }
  doc["assertions"] = std::move(assertions);
  return doc.dump(2) + "\n";
}

}  // namespace rdag
