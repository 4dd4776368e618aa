#include "rdag/scenario.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <numbers>
#include <set>
#include <sstream>

#include "rdag/error.hpp"
#include "rdag/random.hpp"

namespace rdag {

namespace {

using nlohmann::json;

std::string join(std::string_view path, std::string_view key) {
  return path.empty() ? std::string(key) : fmt::format("{}.{}", path, key);
}

void check_keys(const json& obj, std::string_view path, std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) throw ConfigError(std::string(path), "expected a JSON object");
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(join(path, key), "unknown field");
    }
  }
}

template <typename T>
T get(const json& obj, std::string_view path, const char* key) {
  if (!obj.contains(key)) throw ConfigError(join(path, key), "missing required field");
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(join(path, key), fmt::format("wrong type ({})", e.what()));
  }
}

template <typename T>
T get_or(const json& obj, std::string_view path, const char* key, T fallback) {
  return obj.contains(key) ? get<T>(obj, path, key) : fallback;
}

double get_finite(const json& obj, std::string_view path, const char* key, double fallback) {
  const double v = get_or<double>(obj, path, key, fallback);
  if (!std::isfinite(v)) throw ConfigError(join(path, key), "must be finite");
  return v;
}

/// A scalar broadcasts to every axis; an array must have exactly `dim` entries.
Vec get_vec(const json& value, const std::string& path, int dim) {
  if (value.is_number()) return Vec::Constant(dim, value.get<double>());
  if (!value.is_array()) throw ConfigError(path, "expected a number or an array of numbers");
  if (static_cast<int>(value.size()) != dim) {
    throw ConfigError(path, fmt::format("expected {} components, got {}", dim, value.size()));
  }
  Vec v(dim);
  for (int k = 0; k < dim; ++k) {
    if (!value[static_cast<std::size_t>(k)].is_number()) throw ConfigError(path, "components must be numbers");
    v[k] = value[static_cast<std::size_t>(k)].get<double>();
  }
  if (!v.allFinite()) throw ConfigError(path, "components must be finite");
  return v;
}

json vec_json(const Vec& v) { return to_std(v); }

Mode parse_mode(const std::string& s) {
  if (s == "continuous") return Mode::kContinuous;
  if (s == "discrete") return Mode::kDiscrete;
  throw ConfigError("mode", "must be \"continuous\" or \"discrete\"");
}

// ---- strategies --------------------------------------------------------

struct StrategyContext {
  int dim;
  std::mt19937_64* phase_rng;
};

Vec draw_phase(StrategyContext& ctx) {
  std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
  Vec v(ctx.dim);
  for (int k = 0; k < ctx.dim; ++k) v[k] = u(*ctx.phase_rng);
  return v;
}

Sinusoid parse_sinusoid(const json& obj, const std::string& path, StrategyContext& ctx, bool random_phase_default) {
  Sinusoid s;
  s.amplitude = get_vec(obj.at("amplitude"), join(path, "amplitude"), ctx.dim);
  if (!obj.contains("frequency")) throw ConfigError(join(path, "frequency"), "missing required field");
  s.frequency = get_vec(obj.at("frequency"), join(path, "frequency"), ctx.dim);
  if (obj.contains("phase") && obj.at("phase").is_string()) {
    if (obj.at("phase").get<std::string>() != "random") throw ConfigError(join(path, "phase"), "string form must be \"random\"");
    s.phase = draw_phase(ctx);
  } else if (obj.contains("phase")) {
    s.phase = get_vec(obj.at("phase"), join(path, "phase"), ctx.dim);
  } else {
    s.phase = random_phase_default ? draw_phase(ctx) : Vec::Zero(ctx.dim);
  }
  return s;
}

AdversaryStrategy parse_strategy(const json& obj, const std::string& path, StrategyContext& ctx, const Digraph& graph,
                                 VertexId owner) {
  if (!obj.is_object()) throw ConfigError(path, "strategy must be an object");
  const auto kind = get<std::string>(obj, path, "kind");
  if (kind == "constant_drift") {
    check_keys(obj, path, {"kind", "velocity"});
    if (!obj.contains("velocity")) throw ConfigError(join(path, "velocity"), "missing required field");
    return ConstantDrift{get_vec(obj.at("velocity"), join(path, "velocity"), ctx.dim)};
  }
  if (kind == "sinusoid") {
    check_keys(obj, path, {"kind", "amplitude", "frequency", "phase"});
    if (!obj.contains("amplitude")) throw ConfigError(join(path, "amplitude"), "missing required field");
    return parse_sinusoid(obj, path, ctx, false);
  }
  if (kind == "stealthy_shadow") {
    check_keys(obj, path, {"kind", "gain"});
    const double gain = get_finite(obj, path, "gain", 1.0);
    if (!(gain > 0.0 && gain <= 1.0)) throw ConfigError(join(path, "gain"), "must lie in (0, 1]");
    return StealthyShadow{gain};
  }
  if (kind == "per_edge_byzantine") {
    check_keys(obj, path, {"kind", "amplitude", "frequency", "phase", "per_receiver", "fallback"});
    PerEdgeByzantine s;
    const bool has_template = obj.contains("amplitude");
    if (obj.contains("fallback")) {
      const auto fpath = join(path, "fallback");
      check_keys(obj.at("fallback"), fpath, {"amplitude", "frequency", "phase"});
      s.fallback = parse_sinusoid(obj.at("fallback"), fpath, ctx, false);
    } else if (has_template) {
      json tmpl = obj;
      tmpl.erase("phase");
      s.fallback = parse_sinusoid(tmpl, path, ctx, false);
    } else {
      throw ConfigError(path, "needs amplitude/frequency or an explicit fallback");
    }
    if (obj.contains("per_receiver")) {
      const auto rpath = join(path, "per_receiver");
      if (!obj.at("per_receiver").is_object()) throw ConfigError(rpath, "expected an object keyed by receiver id");
      for (const auto& [key, value] : obj.at("per_receiver").items()) {
        VertexId id = -1;
        try {
          id = std::stoi(key);
        } catch (const std::exception&) {
          throw ConfigError(join(rpath, key), "receiver key must be an integer id");
        }
        if (id < 0 || id >= graph.size()) throw ConfigError(join(rpath, key), "receiver id outside the graph");
        check_keys(value, join(rpath, key), {"amplitude", "frequency", "phase"});
        s.per_receiver[id] = parse_sinusoid(value, join(rpath, key), ctx, false);
      }
    }
    if (has_template) {
      // Every out-neighbor without an explicit entry gets its own phase.
      for (VertexId r = 0; r < graph.size(); ++r) {
        const auto in = graph.in_neighbors(r);
        if (!std::binary_search(in.begin(), in.end(), owner) || s.per_receiver.count(r)) continue;
        s.per_receiver[r] = parse_sinusoid(obj, path, ctx, true);
      }
    }
    return s;
  }
  throw ConfigError(join(path, "kind"),
                    "must be one of constant_drift, sinusoid, stealthy_shadow, per_edge_byzantine");
}

json sinusoid_json(const Sinusoid& s) {
  return json{{"amplitude", vec_json(s.amplitude)}, {"frequency", vec_json(s.frequency)}, {"phase", vec_json(s.phase)}};
}

json strategy_json(const AdversaryStrategy& strategy) {
  return std::visit(
      [](const auto& s) -> json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ConstantDrift>) {
          return json{{"kind", "constant_drift"}, {"velocity", vec_json(s.velocity)}};
        } else if constexpr (std::is_same_v<T, Sinusoid>) {
          json j = sinusoid_json(s);
          j["kind"] = "sinusoid";
          return j;
        } else if constexpr (std::is_same_v<T, StealthyShadow>) {
          return json{{"kind", "stealthy_shadow"}, {"gain", s.gain}};
        } else {
          json per = json::object();
          for (const auto& [id, sig] : s.per_receiver) per[std::to_string(id)] = sinusoid_json(sig);
          return json{{"kind", "per_edge_byzantine"}, {"per_receiver", per}, {"fallback", sinusoid_json(s.fallback)}};
        }
      },
      strategy);
}

// ---- graph -------------------------------------------------------------

struct ResolvedGraph {
  GraphBundle bundle;
  bool from_file_with_placement = false;
};

ResolvedGraph parse_graph(const json& obj, const std::filesystem::path& base_dir, const SeedStreams& streams) {
  const std::string path = "graph";
  if (!obj.is_object()) throw ConfigError(path, "expected an object");
  ResolvedGraph out;
  if (obj.contains("generator")) {
    const auto gen = get<std::string>(obj, path, "generator");
    if (gen != "layered") throw ConfigError("graph.generator", "only \"layered\" is supported");
    check_keys(obj, path, {"generator", "level_sizes", "wiring", "k"});
    const auto sizes = get<std::vector<int>>(obj, path, "level_sizes");
    const auto wiring = get_or<std::string>(obj, path, "wiring", "full_previous");
    WiringRule rule;
    if (wiring == "full_previous") {
      rule = WiringRule::full_previous();
    } else if (wiring == "sample") {
      rule = WiringRule::sample(get<int>(obj, path, "k"), streams.seed_for("graph_sampling"));
    } else {
      throw ConfigError("graph.wiring", "must be \"full_previous\" or \"sample\"");
    }
    try {
      auto layered = build_layered_rdag(sizes, rule);
      out.bundle.graph = std::move(layered.graph);
      out.bundle.partition = std::move(layered.partition);
    } catch (const ParameterError& e) {
      throw ConfigError("graph", e.what());
    }
    return out;
  }
  if (obj.contains("file")) {
    check_keys(obj, path, {"file"});
    auto file = std::filesystem::path(get<std::string>(obj, path, "file"));
    if (file.is_relative()) file = base_dir / file;
    out.bundle = load_graph_bundle(file);
    out.from_file_with_placement = true;
  } else {
    check_keys(obj, path, {"n", "in_neighbors", "levels", "r"});
    out.bundle = parse_graph_bundle(obj.dump());
  }
  if (out.bundle.partition.levels.empty()) throw ConfigError("graph.levels", "a layered partition is required");
  if (!obj.contains("r") && !out.from_file_with_placement) {
    std::size_t r = out.bundle.partition.levels.front().size();
    for (const auto& l : out.bundle.partition.levels) r = std::min(r, l.size());
    out.bundle.partition.r = static_cast<int>(r);
  }
  return out;
}

std::vector<VertexId> parse_adversaries(const json& obj, const RdagPartition& partition, const SeedStreams& streams) {
  const std::string path = "adversaries";
  if (obj.contains("ids")) {
    check_keys(obj, path, {"ids"});
    return get<std::vector<VertexId>>(obj, path, "ids");
  }
  check_keys(obj, path, {"per_level", "selection", "include_level0"});
  const int k = get<int>(obj, path, "per_level");
  const auto selection = get_or<std::string>(obj, path, "selection", "last");
  const bool include0 = get_or<bool>(obj, path, "include_level0", true);
  if (k < 0) throw ConfigError("adversaries.per_level", "must be >= 0");
  auto rng = streams.engine("adversary_placement");
  std::vector<VertexId> ids;
  for (int l = 0; l < partition.level_count(); ++l) {
    if (l == 0 && !include0) continue;
    auto level = partition.levels[static_cast<std::size_t>(l)];
    std::sort(level.begin(), level.end());
    if (static_cast<int>(level.size()) < k) {
      throw ConfigError("adversaries.per_level", fmt::format("level {} has only {} vertices", l, level.size()));
    }
    if (selection == "first") {
      ids.insert(ids.end(), level.begin(), level.begin() + k);
    } else if (selection == "last") {
      ids.insert(ids.end(), level.end() - k, level.end());
    } else if (selection == "random") {
      std::sample(level.begin(), level.end(), std::back_inserter(ids), k, rng);
    } else {
      throw ConfigError("adversaries.selection", "must be first, last or random");
    }
  }
  return ids;
}

// ---- initial conditions ------------------------------------------------

struct TauGenerator {
  enum Kind { kFixed, kUniformBox } kind = kUniformBox;
  Vec fixed;
  Vec low, high;
};

TauGenerator parse_tau_generator(const json& obj, const std::string& path, int dim, TauGenerator fallback) {
  if (obj.is_null()) return fallback;
  if (obj.is_array() || obj.is_number()) return {TauGenerator::kFixed, get_vec(obj, path, dim), {}, {}};
  check_keys(obj, path, {"generator", "low", "high", "value"});
  const auto gen = get<std::string>(obj, path, "generator");
  if (gen == "uniform_box") {
    TauGenerator g;
    g.low = get_vec(obj.contains("low") ? obj.at("low") : json(-20.0), join(path, "low"), dim);
    g.high = get_vec(obj.contains("high") ? obj.at("high") : json(20.0), join(path, "high"), dim);
    if ((g.high - g.low).minCoeff() < 0.0) throw ConfigError(path, "low must not exceed high");
    return g;
  }
  if (gen == "fixed") return {TauGenerator::kFixed, get_vec(obj.at("value"), join(path, "value"), dim), {}, {}};
  throw ConfigError(join(path, "generator"), "must be uniform_box or fixed");
}

Vec draw_tau(const TauGenerator& g, std::mt19937_64& rng, int dim) {
  if (g.kind == TauGenerator::kFixed) return g.fixed;
  Vec v(dim);
  for (int k = 0; k < dim; ++k) {
    std::uniform_real_distribution<double> u(g.low[k], g.high[k]);
    v[k] = u(rng);
  }
  return v;
}

Role parse_role(const std::string& s, const std::string& path) {
  if (s == "leader") return Role::kLeader;
  if (s == "normal") return Role::kNormal;
  if (s == "adversary") return Role::kAdversary;
  throw ConfigError(path, "must be leader, normal or adversary");
}

}  // namespace

RunConfig Scenario::run_config() const {
  RunConfig c;
  c.mode = mode;
  c.params = params;
  c.convergence = convergence;
  c.t_final = t_final;
  c.max_steps = max_steps;
  c.thin = output.thin;
  c.assertions = assertions;
  return c;
}

Scenario parse_scenario(std::string_view text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", fmt::format("scenario is not valid JSON: {}", e.what()));
  }
  check_keys(doc, "", {"name", "mode", "dimension", "seed", "t_final", "max_steps", "params", "convergence", "graph",
                       "adversaries", "adversary_mode", "strategies", "initial_conditions", "agents", "assertions",
                       "output", "leader_tolerance"});

  Scenario sc;
  sc.name = get_or<std::string>(doc, "", "name", "scenario");
  sc.mode = parse_mode(get_or<std::string>(doc, "", "mode", "continuous"));
  const bool continuous = sc.mode == Mode::kContinuous;
  sc.dimension = get_or<int>(doc, "", "dimension", 2);
  if (sc.dimension < 1 || sc.dimension > kMaxDimension) {
    throw ConfigError("dimension", fmt::format("must lie in [1, {}]", kMaxDimension));
  }
  const int dim = sc.dimension;
  sc.seed = get_or<std::uint64_t>(doc, "", "seed", 0);
  const SeedStreams streams(sc.seed);
  sc.leader_tolerance = get_finite(doc, "", "leader_tolerance", 1e-9);

  if (continuous) {
    if (doc.contains("max_steps")) throw ConfigError("max_steps", "only valid in discrete mode (use t_final)");
    sc.t_final = get_finite(doc, "", "t_final", 200.0);
    if (sc.t_final < 0.0) throw ConfigError("t_final", "must be >= 0");
  } else {
    if (doc.contains("t_final")) throw ConfigError("t_final", "only valid in continuous mode (use max_steps)");
    sc.max_steps = get_or<long long>(doc, "", "max_steps", 10000);
    if (sc.max_steps < 0) throw ConfigError("max_steps", "must be >= 0");
  }

  // Graph first: F may come from a graph file.
  if (!doc.contains("graph")) throw ConfigError("graph", "missing required field");
  auto graph = parse_graph(doc.at("graph"), base_dir, streams);
  sc.topology = std::move(graph.bundle);
  const int n = sc.topology.graph.size();
  std::vector<int> level_of;
  try {
    level_of = sc.topology.partition.level_of(n);
  } catch (const StructuralError& e) {
    throw ConfigError("graph.levels", e.what());
  }

  const json params = doc.value("params", json::object());
  if (continuous) {
    check_keys(params, "params", {"alpha", "u_max", "F", "eps_d", "dt", "eps_omega", "eps_sing"});
  } else {
    check_keys(params, "params", {"u_max", "F", "eps_omega"});
  }
  const int file_F = graph.from_file_with_placement ? sc.topology.placement.F : 0;
  sc.params.F = get_or<int>(params, "params", "F", file_F);
  if (graph.from_file_with_placement && params.contains("F") && sc.params.F != file_F) {
    throw ConfigError("params.F", fmt::format("disagrees with F = {} in the graph file", file_F));
  }
  sc.params.u_max = get_finite(params, "params", "u_max", 1.0);
  sc.params.eps_omega = get_finite(params, "params", "eps_omega", 1e-9);
  if (continuous) {
    sc.params.alpha = get_finite(params, "params", "alpha", 0.8);
    sc.params.eps_d = get_finite(params, "params", "eps_d", 0.1);
    sc.params.dt = get_finite(params, "params", "dt", sc.params.eps_d / 10.0);
    sc.params.eps_sing = get_finite(params, "params", "eps_sing", 1e-12);
  }
  sc.params.validate(continuous);
  sc.topology.placement.F = sc.params.F;

  const json conv = doc.value("convergence", json::object());
  check_keys(conv, "convergence", {"delta", "window", "stop_when_converged"});
  sc.convergence.delta = get_finite(conv, "convergence", "delta", 1e-3);
  sc.convergence.window = get_or<int>(conv, "convergence", "window", 50);
  sc.convergence.stop_when_converged = get_or<bool>(conv, "convergence", "stop_when_converged", true);
  if (!(sc.convergence.delta >= 0.0)) throw ConfigError("convergence.delta", "must be >= 0");
  if (sc.convergence.window < 0) throw ConfigError("convergence.window", "must be >= 0");

  // Adversary placement.
  if (doc.contains("adversaries")) {
    sc.topology.placement.adversaries = parse_adversaries(doc.at("adversaries"), sc.topology.partition, streams);
  } else if (!graph.from_file_with_placement) {
    sc.topology.placement.adversaries.clear();
  }
  auto& adv = sc.topology.placement.adversaries;
  std::sort(adv.begin(), adv.end());
  if (std::adjacent_find(adv.begin(), adv.end()) != adv.end()) throw ConfigError("adversaries", "duplicate id");
  for (VertexId a : adv) {
    if (a < 0 || a >= n) throw ConfigError("adversaries", fmt::format("id {} outside the graph", a));
  }

  const auto mode_str = get_or<std::string>(doc, "", "adversary_mode", "communication");
  if (mode_str == "communication") {
    sc.adversary_mode = AdversaryMode::kCommunication;
  } else if (mode_str == "physical") {
    sc.adversary_mode = AdversaryMode::kPhysical;
  } else {
    throw ConfigError("adversary_mode", "must be communication or physical");
  }

  // Initial conditions.
  const json ic = doc.value("initial_conditions", json::object());
  check_keys(ic, "initial_conditions", {"leader_tau", "follower_tau", "adversary_tau", "formation"});
  const Vec leader_tau = ic.contains("leader_tau") ? get_vec(ic.at("leader_tau"), "initial_conditions.leader_tau", dim)
                                                   : Vec::Zero(dim);
  TauGenerator box;
  box.low = Vec::Constant(dim, -20.0);
  box.high = Vec::Constant(dim, 20.0);
  const auto follower_gen =
      parse_tau_generator(ic.value("follower_tau", json()), "initial_conditions.follower_tau", dim, box);
  const auto adversary_gen =
      parse_tau_generator(ic.value("adversary_tau", json()), "initial_conditions.adversary_tau", dim, follower_gen);

  std::vector<Vec> offsets(static_cast<std::size_t>(n), Vec::Zero(dim));
  if (ic.contains("formation")) {
    const auto& f = ic.at("formation");
    const std::string fpath = "initial_conditions.formation";
    check_keys(f, fpath, {"generator", "radius", "center", "points"});
    const auto gen = get<std::string>(f, fpath, "generator");
    if (gen == "circle") {
      if (dim != 2) throw ConfigError(fpath, "circle formation requires dimension 2");
      const double radius = get_finite(f, fpath, "radius", 10.0);
      const Vec center = f.contains("center") ? get_vec(f.at("center"), join(fpath, "center"), 2) : Vec::Zero(2);
      const int points = get_or<int>(f, fpath, "points", n);
      if (points < n) throw ConfigError(join(fpath, "points"), "must be at least the number of agents");
      try {
        auto circle = formation_offsets_circle(points, radius, center);
        std::copy_n(circle.begin(), n, offsets.begin());
      } catch (const ParameterError& e) {
        throw ConfigError(fpath, e.what());
      }
    } else if (gen != "zero") {
      throw ConfigError(join(fpath, "generator"), "must be circle or zero");
    }
  }

  auto ic_rng = streams.engine("initial_conditions");
  sc.agents.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    auto& a = sc.agents[static_cast<std::size_t>(i)];
    a.id = i;
    a.level = level_of[static_cast<std::size_t>(i)];
    a.xi = offsets[static_cast<std::size_t>(i)];
    Vec tau;
    if (std::binary_search(adv.begin(), adv.end(), i)) {
      a.role = Role::kAdversary;
      tau = draw_tau(adversary_gen, ic_rng, dim);
    } else if (a.level == 0) {
      a.role = Role::kLeader;
      tau = leader_tau;
    } else {
      a.role = Role::kNormal;
      tau = draw_tau(follower_gen, ic_rng, dim);
    }
    a.p0 = tau + a.xi;
  }

  // Strategy cycle over adversaries in id order.
  auto phase_rng = streams.engine("strategy_phases");
  StrategyContext ctx{dim, &phase_rng};
  const json cycle = doc.value("strategies", json::array({json{{"kind", "stealthy_shadow"}, {"gain", 1.0}}}));
  if (!cycle.is_array() || (cycle.empty() && !adv.empty())) {
    throw ConfigError("strategies", "expected a nonempty array of strategies");
  }

  // Explicit per-agent entries.
  std::map<VertexId, json> explicit_agents;
  if (doc.contains("agents")) {
    if (!doc.at("agents").is_array()) throw ConfigError("agents", "expected an array");
    for (std::size_t k = 0; k < doc.at("agents").size(); ++k) {
      const auto& e = doc.at("agents")[k];
      const auto path = fmt::format("agents[{}]", k);
      check_keys(e, path, {"id", "level", "role", "p0", "tau0", "xi", "strategy"});
      const auto id = get<VertexId>(e, path, "id");
      if (id < 0 || id >= n) throw ConfigError(join(path, "id"), "outside the graph");
      if (!explicit_agents.emplace(id, e).second) throw ConfigError(join(path, "id"), "listed twice");
    }
  }

  std::size_t cycle_pos = 0;
  for (int i = 0; i < n; ++i) {
    auto& a = sc.agents[static_cast<std::size_t>(i)];
    const auto it = explicit_agents.find(i);
    const json* e = it == explicit_agents.end() ? nullptr : &it->second;
    const std::string path = fmt::format("agents[id={}]", i);
    if (e) {
      if (e->contains("level") && get<int>(*e, path, "level") != a.level) {
        throw ConfigError(join(path, "level"), fmt::format("graph partition puts agent {} in level {}", i, a.level));
      }
      if (e->contains("role") && parse_role(get<std::string>(*e, path, "role"), join(path, "role")) != a.role) {
        throw ConfigError(join(path, "role"), fmt::format("agent {} is a {} by placement and level", i, to_string(a.role)));
      }
      const Vec tau = a.p0 - a.xi;
      if (e->contains("xi")) a.xi = get_vec(e->at("xi"), join(path, "xi"), dim);
      if (e->contains("p0") && e->contains("tau0")) throw ConfigError(path, "give p0 or tau0, not both");
      if (e->contains("p0")) {
        a.p0 = get_vec(e->at("p0"), join(path, "p0"), dim);
      } else if (e->contains("tau0")) {
        a.p0 = get_vec(e->at("tau0"), join(path, "tau0"), dim) + a.xi;
      } else {
        a.p0 = tau + a.xi;
      }
    }
    if (a.role != Role::kAdversary) {
      if (e && e->contains("strategy")) throw ConfigError(join(path, "strategy"), "only adversaries carry a strategy");
      continue;
    }
    if (e && e->contains("strategy")) {
      a.strategy = parse_strategy(e->at("strategy"), join(path, "strategy"), ctx, sc.topology.graph, i);
    } else {
      const auto spath = fmt::format("strategies[{}]", cycle_pos % cycle.size());
      a.strategy = parse_strategy(cycle[cycle_pos % cycle.size()], spath, ctx, sc.topology.graph, i);
      ++cycle_pos;
    }
  }

  const json asserts = doc.value("assertions", json::object());
  check_keys(asserts, "assertions",
             {"input_bound", "convergence", "level_order", "finite_time_bound", "lyapunov_level1",
              "discrete_contraction", "stay_at_formation"});
  auto& t = sc.assertions;
  t.input_bound = get_or<bool>(asserts, "assertions", "input_bound", t.input_bound);
  t.convergence = get_or<bool>(asserts, "assertions", "convergence", t.convergence);
  t.level_order = get_or<bool>(asserts, "assertions", "level_order", t.level_order);
  t.finite_time_bound = get_or<bool>(asserts, "assertions", "finite_time_bound", t.finite_time_bound);
  t.lyapunov_level1 = get_or<bool>(asserts, "assertions", "lyapunov_level1", t.lyapunov_level1);
  t.discrete_contraction = get_or<bool>(asserts, "assertions", "discrete_contraction", t.discrete_contraction);
  t.stay_at_formation = get_or<bool>(asserts, "assertions", "stay_at_formation", t.stay_at_formation);

  const json out = doc.value("output", json::object());
  check_keys(out, "output", {"dir", "trace", "report", "echo", "thin"});
  sc.output.dir = get_or<std::string>(out, "output", "dir", sc.output.dir);
  sc.output.trace = get_or<std::string>(out, "output", "trace", sc.output.trace);
  sc.output.report = get_or<std::string>(out, "output", "report", sc.output.report);
  sc.output.echo = get_or<std::string>(out, "output", "echo", sc.output.echo);
  sc.output.thin = get_or<int>(out, "output", "thin", 1);
  if (sc.output.thin < 1) throw ConfigError("output.thin", "must be >= 1");

  build_world(sc);  // leader co-location check
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open scenario file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), path.parent_path());
}

std::string dump_scenario(const Scenario& sc) {
  json doc;
  doc["name"] = sc.name;
  doc["mode"] = std::string(to_string(sc.mode));
  doc["dimension"] = sc.dimension;
  doc["seed"] = sc.seed;
  doc["leader_tolerance"] = sc.leader_tolerance;
  json params{{"u_max", sc.params.u_max}, {"F", sc.params.F}, {"eps_omega", sc.params.eps_omega}};
  if (sc.mode == Mode::kContinuous) {
    doc["t_final"] = sc.t_final;
    params["alpha"] = sc.params.alpha;
    params["eps_d"] = sc.params.eps_d;
    params["dt"] = sc.params.dt;
    params["eps_sing"] = sc.params.eps_sing;
  } else {
    doc["max_steps"] = sc.max_steps;
  }
  doc["params"] = params;
  doc["convergence"] = {{"delta", sc.convergence.delta},
                        {"window", sc.convergence.window},
                        {"stop_when_converged", sc.convergence.stop_when_converged}};
  doc["graph"] = {{"n", sc.topology.graph.size()},
                  {"in_neighbors", sc.topology.graph.adjacency()},
                  {"levels", sc.topology.partition.levels},
                  {"r", sc.topology.partition.r}};
  doc["adversaries"] = {{"ids", sc.topology.placement.adversaries}};
  doc["adversary_mode"] = sc.adversary_mode == AdversaryMode::kPhysical ? "physical" : "communication";

  json agents = json::array();
  for (const auto& a : sc.agents) {
    json e{{"id", a.id}, {"level", a.level}, {"role", std::string(to_string(a.role))}, {"p0", vec_json(a.p0)},
           {"xi", vec_json(a.xi)}};
    if (a.strategy) e["strategy"] = strategy_json(*a.strategy);
    agents.push_back(std::move(e));
  }
  doc["agents"] = std::move(agents);

  const auto& t = sc.assertions;
  doc["assertions"] = {{"input_bound", t.input_bound},
                       {"convergence", t.convergence},
                       {"level_order", t.level_order},
                       {"finite_time_bound", t.finite_time_bound},
                       {"lyapunov_level1", t.lyapunov_level1},
                       {"discrete_contraction", t.discrete_contraction},
                       {"stay_at_formation", t.stay_at_formation}};
  doc["output"] = {{"dir", sc.output.dir},
                   {"trace", sc.output.trace},
                   {"report", sc.output.report},
                   {"echo", sc.output.echo},
                   {"thin", sc.output.thin}};
  return doc.dump(2) + "\n";
}

World build_world(const Scenario& sc) {
  World w;
  w.graph = std::make_shared<const Digraph>(sc.topology.graph);
  w.dimension = sc.dimension;
  w.adversary_mode = sc.adversary_mode;
  const auto n = sc.agents.size();
  w.agents.resize(n);
  w.strategy.resize(n);
  w.tau0.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = sc.agents[i];
    w.agents[i] = AgentState{a.id, a.level, a.role, a.p0, a.xi};
    w.strategy[i] = a.strategy;
    w.tau0[i] = a.p0 - a.xi;
  }
  w.tau_leader = n == 0 ? Vec::Zero(sc.dimension) : leader_reference(w, sc.leader_tolerance);
  return w;
}

AuditSummary audit_topology(const GraphBundle& topology) {
  AuditSummary s;
  s.rdag = validate_rdag(topology.graph, topology.partition);
  s.f_local = validate_f_local(topology.graph, topology.placement);
  s.in_degree = validate_in_degree(topology.graph, topology.partition, 3 * topology.placement.F + 1);
  return s;
}

RunResult run(const Scenario& scenario, bool force) {
  if (!force) {
    const auto audit = audit_topology(scenario.topology);
    auto first = [](const ValidationReport& r) { return r.violations.front().message; };
    if (!audit.rdag.ok) throw AuditError("rdag", first(audit.rdag));
    if (!audit.f_local.ok) throw AuditError("f_local", first(audit.f_local));
    if (!audit.in_degree.ok) throw AuditError("in_degree", first(audit.in_degree));
  }
  return run_world(build_world(scenario), scenario.run_config());
}

}  // namespace rdag
