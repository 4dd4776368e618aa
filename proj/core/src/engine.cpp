#include "rdag/engine.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "rdag/analysis.hpp"
#include "rdag/error.hpp"

namespace rdag {

namespace {

struct StepPlan {
  TraceRecord record;
  std::vector<Vec> inputs;
};

bool retained_adversaries_in_range(const World& world, const std::vector<VertexId>& retained,
                                   const std::vector<Measurement>& ms, double error) {
  auto m = ms.begin();
  for (VertexId j : retained) {
    while (m != ms.end() && m->sender < j) ++m;
    if (m == ms.end()) break;
    if (world.agents[static_cast<std::size_t>(j)].role == Role::kAdversary && m->relative.norm() > error) return false;
  }
  return true;
}

StepPlan plan_step(const World& world, std::vector<FilterState>& filters, const ControlParams& params, Mode mode) {
  const int n = world.size();
  StepPlan plan;
  auto& rec = plan.record;
  rec.step = world.step;
  rec.time = world.time;
  rec.agents.resize(static_cast<std::size_t>(n));
  plan.inputs.assign(static_cast<std::size_t>(n), Vec::Zero(world.dimension));
  if (filters.size() != static_cast<std::size_t>(n)) filters.resize(static_cast<std::size_t>(n));

  const bool continuous = mode == Mode::kContinuous;
  rec.refresh = continuous ? dwell_gate(world.step, params.steps_per_dwell()) : true;

  std::vector<Measurement> ms;
  for (int i = 0; i < n; ++i) {
    const auto& agent = world.agents[static_cast<std::size_t>(i)];
    auto& s = rec.agents[static_cast<std::size_t>(i)];
    s.tau = agent.tau();
    s.error = (s.tau - world.tau_leader).norm();
    s.retained_hash = retained_set_hash({});
    if (agent.role != Role::kNormal) continue;

    measure_into(world, i, world.time, ms);
    auto& fs = filters[static_cast<std::size_t>(i)];
    if (rec.refresh) {
      fs.retained = filter_neighbors(ms, params.F);
      fs.last_update_index = world.step;
    }
    s.omega_count = static_cast<int>(omega_set(ms, params.eps_omega).size());

    ControlOutput out;
    if (continuous) {
      const auto weights = control_weights_continuous(fs.retained, s.omega_count, params.F);
      s.active = s.omega_count > params.F;
      out = continuous_control(ms, weights, params, world.dimension);
    } else {
      const auto weights = fs.retained.empty() ? WeightMap{} : control_weights_discrete(fs.retained);
      s.active = !fs.retained.empty();
      out = discrete_control(ms, weights, params.u_max, world.dimension);
    }
    plan.inputs[static_cast<std::size_t>(i)] = out.u;
    s.u_norm = out.u.norm();
    s.gamma = out.gamma;
    s.retained_count = static_cast<int>(fs.retained.size());
    s.retained_hash = retained_set_hash(fs.retained);
    s.adversaries_in_range = retained_adversaries_in_range(world, fs.retained, ms, s.error);
  }
  return plan;
}

void apply_step(World& world, StepPlan& plan, const ControlParams& params, Mode mode) {
  const bool continuous = mode == Mode::kContinuous;
  const double h = continuous ? params.dt : 1.0;
  const long long next_step = world.step + 1;
  const double next_time = continuous ? static_cast<double>(next_step) * params.dt : static_cast<double>(next_step);

  for (int i = 0; i < world.size(); ++i) {
    auto& agent = world.agents[static_cast<std::size_t>(i)];
    if (agent.role == Role::kNormal) {
      agent.p += h * plan.inputs[static_cast<std::size_t>(i)];
    } else if (agent.role == Role::kAdversary && world.adversary_mode == AdversaryMode::kPhysical) {
      const auto& strategy = world.strategy[static_cast<std::size_t>(i)];
      if (strategy && is_broadcast(*strategy)) {
        const Vec before = agent.tau();
        const Vec after = emitted_tau(*strategy, world.tau0[static_cast<std::size_t>(i)], next_time, i, before,
                                      world.tau_leader);
        agent.p = after + agent.xi;
        plan.record.agents[static_cast<std::size_t>(i)].u_norm = (after - before).norm() / h;
      }
    }
    if (!agent.p.allFinite()) {
      throw NumericError(i, world.step, fmt::format("agent {} left the finite range at step {}", i, world.step));
    }
  }
  world.step = next_step;
  world.time = next_time;
}

TraceRecord advance(World& world, std::vector<FilterState>& filters, const ControlParams& params, Mode mode) {
  auto plan = plan_step(world, filters, params, mode);
  apply_step(world, plan, params, mode);
  return std::move(plan.record);
}

struct AgentTrack {
  double max_u = 0.0;
  double gamma_star = 1.0;
  int retained_min = std::numeric_limits<int>::max();
  long long trailing = 0;  // consecutive records with error <= delta
  bool locked = false;     // at tau_L with |Omega| <= F and every normal in-neighbor locked
  std::optional<AgentSample> previous;
};

struct Check {
  Check(std::string n, bool on) : name(std::move(n)), enabled(on) {}

  std::string name;
  bool enabled = false;
  bool passed = true;
  long long evaluated = 0;
  std::string first_failure;

  void fail(std::string why) {
    if (passed) first_failure = std::move(why);
    passed = false;
  }

  AssertionResult result() const {
    AssertionResult r{name, passed, {}};
    r.detail = passed ? fmt::format("{} checks passed", evaluated) : first_failure;
    return r;
  }
};

}  // namespace

std::string_view to_string(Mode mode) { return mode == Mode::kContinuous ? "continuous" : "discrete"; }

std::uint64_t retained_set_hash(const std::vector<VertexId>& retained) {
  std::uint64_t h = 14695981039346656037ull;
  for (VertexId v : retained) {
    auto x = static_cast<std::uint32_t>(v);
    for (int b = 0; b < 4; ++b) {
      h ^= (x >> (8 * b)) & 0xffu;
      h *= 1099511628211ull;
    }
  }
  return h;
}

TraceRecord step_continuous(World& world, std::vector<FilterState>& filters, const ControlParams& params) {
  return advance(world, filters, params, Mode::kContinuous);
}

TraceRecord step_discrete(World& world, std::vector<FilterState>& filters, const ControlParams& params) {
  return advance(world, filters, params, Mode::kDiscrete);
}

long long RunConfig::step_limit() const {
  if (mode == Mode::kDiscrete) return max_steps;
  return std::llround(t_final / params.dt);
}

bool BoundReport::passed() const {
  return std::all_of(assertions.begin(), assertions.end(), [](const AssertionResult& a) { return a.passed; });
}

RunResult run_world(World world, const RunConfig& config) {
  const bool continuous = config.mode == Mode::kContinuous;
  const auto& params = config.params;
  params.validate(continuous);
  if (config.thin < 1) throw ConfigError("output.thin", "must be >= 1");
  if (config.convergence.window < 0) throw ConfigError("convergence.window", "must be >= 0");

  RunResult result;
  auto& report = result.report;
  report.mode = config.mode;
  report.tau_leader = world.tau_leader;
  const int n = world.size();
  if (n == 0) {
    result.final_world = std::move(world);
    return result;
  }

  const long long limit = config.step_limit();
  if (limit < 0) throw ConfigError(continuous ? "t_final" : "max_steps", "must be >= 0");
  const long long need = static_cast<long long>(config.convergence.window) + 1;
  const double u_cap = params.u_max * (1.0 + 1e-12);

  std::vector<FilterState> filters(static_cast<std::size_t>(n));
  std::vector<AgentTrack> track(static_cast<std::size_t>(n));
  result.errors.assign(static_cast<std::size_t>(n), {});

  Check input_bound{"input_bound", config.assertions.input_bound};
  Check lyapunov{"lyapunov_level1", config.assertions.lyapunov_level1 && continuous};
  Check stay{"stay_at_formation", config.assertions.stay_at_formation && continuous};
  Check contraction{"discrete_contraction", config.assertions.discrete_contraction && !continuous};

  auto is_tracked_normal = [&](int i) { return world.agents[static_cast<std::size_t>(i)].role == Role::kNormal; };
  std::vector<int> by_level;
  for (int i = 0; i < n; ++i) {
    if (is_tracked_normal(i)) by_level.push_back(i);
  }
  std::stable_sort(by_level.begin(), by_level.end(), [&](int a, int b) {
    return world.agents[static_cast<std::size_t>(a)].level < world.agents[static_cast<std::size_t>(b)].level;
  });

  for (;;) {
    auto plan = plan_step(world, filters, params, config.mode);
    const auto& rec = plan.record;
    bool all_settled = true;
    for (int i = 0; i < n; ++i) {
      const auto& s = rec.agents[static_cast<std::size_t>(i)];
      auto& t = track[static_cast<std::size_t>(i)];
      result.errors[static_cast<std::size_t>(i)].push_back(s.error);
      t.trailing = s.error <= config.convergence.delta ? t.trailing + 1 : 0;
      if (!is_tracked_normal(i)) continue;
      const int level = world.agents[static_cast<std::size_t>(i)].level;

      t.max_u = std::max(t.max_u, s.u_norm);
      ++input_bound.evaluated;
      if (s.u_norm > u_cap) {
        input_bound.fail(fmt::format("agent {} step {}: ||u|| = {:.17g} > u_max", i, rec.step, s.u_norm));
      }
      if (s.active) {
        t.gamma_star = std::min(t.gamma_star, s.gamma);
        t.retained_min = std::min(t.retained_min, s.retained_count);
      }
      if (t.trailing < need) all_settled = false;

      if (t.previous && level == 1) {
        const auto& prev = *t.previous;
        if (lyapunov.enabled) {
          ++lyapunov.evaluated;
          if (s.error > prev.error + 1e-12) {
            lyapunov.fail(fmt::format("agent {} step {}: error rose from {:.17g} to {:.17g}", i, rec.step, prev.error,
                                      s.error));
          }
        }
        if (contraction.enabled && prev.active && prev.adversaries_in_range) {
          ++contraction.evaluated;
          if (prev.retained_count <= 2 * params.F) {
            contraction.fail(fmt::format("agent {} step {}: R = {} <= 2F", i, rec.step - 1, prev.retained_count));
          } else {
            const double c = discrete_contraction_factor(prev.gamma, prev.retained_count, params.F);
            if (s.error > c * prev.error + 1e-9) {
              contraction.fail(fmt::format("agent {} step {}: e[t+1] = {:.17g} > c e[t] = {:.17g} (c = {:.17g})", i,
                                           rec.step - 1, s.error, c * prev.error, c));
            }
          }
        }
      }
      if (stay.enabled) {
        if (t.locked) {
          ++stay.evaluated;
          if (s.u_norm != 0.0 || s.error > params.eps_omega) {
            stay.fail(fmt::format("agent {} step {}: left formation after convergence (||u|| = {:.3e}, e = {:.3e})",
                                  i, rec.step, s.u_norm, s.error));
          }
        }
      }
      t.previous = s;
    }
    if (stay.enabled) {
      for (int i : by_level) {
        auto& t = track[static_cast<std::size_t>(i)];
        const auto& s = rec.agents[static_cast<std::size_t>(i)];
        if (t.locked || s.error > params.eps_omega || s.omega_count > params.F) continue;
        const auto in = world.graph->in_neighbors(i);
        t.locked = std::all_of(in.begin(), in.end(), [&](VertexId j) {
          const auto role = world.agents[static_cast<std::size_t>(j)].role;
          return role != Role::kNormal || track[static_cast<std::size_t>(j)].locked;
        });
      }
    }

    const bool stop = rec.step >= limit || (config.convergence.stop_when_converged && all_settled);
    if (stop) {
      report.steps = rec.step;
      report.final_time = rec.time;
      if (rec.step % config.thin == 0) result.trace.push_back(std::move(plan.record));
      break;
    }
    apply_step(world, plan, params, config.mode);
    if (plan.record.step % config.thin == 0) result.trace.push_back(std::move(plan.record));
  }

  // ---- bound report ------------------------------------------------------
  const double record_dt = config.record_dt();
  int max_level = 0;
  for (const auto& a : world.agents) max_level = std::max(max_level, a.level);
  report.levels.resize(static_cast<std::size_t>(max_level + 1));
  for (int l = 0; l <= max_level; ++l) {
    report.levels[static_cast<std::size_t>(l)].level = l;
    report.levels[static_cast<std::size_t>(l)].max_convergence_time = 0.0;
  }

  Check convergence{"convergence", config.assertions.convergence};
  Check bound_check{"finite_time_bound", config.assertions.finite_time_bound && continuous};
  report.all_converged = true;
  for (int i = 0; i < n; ++i) {
    const auto& agent = world.agents[static_cast<std::size_t>(i)];
    const auto& t = track[static_cast<std::size_t>(i)];
    const auto& errs = result.errors[static_cast<std::size_t>(i)];
    AgentBound b;
    b.id = i;
    b.level = agent.level;
    b.role = agent.role;
    b.e0 = errs.front();
    b.convergence_time = convergence_time(errs, record_dt, config.convergence.delta, config.convergence.window);
    b.gamma_star = t.gamma_star;
    b.retained_min = t.retained_min == std::numeric_limits<int>::max() ? 0 : t.retained_min;
    b.max_u = t.max_u;

    if (agent.role == Role::kNormal) {
      report.max_normal_input = std::max(report.max_normal_input, t.max_u);
      auto& lvl = report.levels[static_cast<std::size_t>(agent.level)];
      ++lvl.normal_agents;
      ++convergence.evaluated;
      if (!b.convergence_time) {
        report.all_converged = false;
        lvl.max_convergence_time.reset();
        convergence.fail(fmt::format("agent {} (level {}) did not converge (final error {:.3e})", i, agent.level,
                                     errs.back()));
      } else if (lvl.max_convergence_time) {
        lvl.max_convergence_time = std::max(*lvl.max_convergence_time, *b.convergence_time);
      }

      if (agent.level == 1 && b.retained_min > 2 * params.F && b.gamma_star > 0.0) {
        if (continuous) {
          b.bound = continuous_T1_bound(b.e0, b.gamma_star, b.retained_min, params.F, params.alpha);
        } else {
          b.contraction = discrete_contraction_factor(b.gamma_star, b.retained_min, params.F);
        }
      }
      if (bound_check.enabled && agent.level == 1) {
        ++bound_check.evaluated;
        if (!b.bound) {
          if (b.e0 > config.convergence.delta) {
            bound_check.fail(fmt::format("agent {}: bound undefined (R_min = {}, F = {})", i, b.retained_min, params.F));
          }
        } else if (!b.convergence_time) {
          bound_check.fail(fmt::format("agent {}: not converged, bound {:.6g} s", i, *b.bound));
        } else if (*b.convergence_time > *b.bound) {
          bound_check.fail(
              fmt::format("agent {}: convergence time {:.6g} s exceeds bound {:.6g} s", i, *b.convergence_time, *b.bound));
        }
      }
    }
    report.agents.push_back(b);
  }

  Check level_order{"level_order", config.assertions.level_order};
  {
    std::optional<double> prev;
    int prev_level = -1;
    for (const auto& lvl : report.levels) {
      if (lvl.level == 0 || lvl.normal_agents == 0) continue;
      if (prev_level >= 0) {
        ++level_order.evaluated;
        if (!prev || !lvl.max_convergence_time) {
          level_order.fail(fmt::format("level {} or {} did not fully converge", prev_level, lvl.level));
        } else if (*prev > *lvl.max_convergence_time) {
          level_order.fail(fmt::format("T_{} = {:.6g} > T_{} = {:.6g}", prev_level, *prev, lvl.level,
                                       *lvl.max_convergence_time));
        }
      }
      prev = lvl.max_convergence_time;
      prev_level = lvl.level;
    }
  }

  for (const Check* c : {&input_bound, &convergence, &level_order, &bound_check, &lyapunov, &contraction, &stay}) {
    if (c->enabled) report.assertions.push_back(c->result());
  }
  result.final_world = std::move(world);
  return result;
}

}  // namespace rdag
