#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "rdag/analysis.hpp"
#include "rdag/engine.hpp"
#include "rdag/error.hpp"
#include "test_support.hpp"

namespace rdag {
namespace {

using test::AgentInit;
using test::make_world;
using test::star_world;

std::vector<AgentInit> stealthy(int n, double gain, int dim = 2) {
  return std::vector<AgentInit>(static_cast<std::size_t>(n),
                                AgentInit{0, Role::kAdversary, zero_vec(dim), StealthyShadow{gain}});
}

ControlParams continuous_params(int F) {
  ControlParams p;
  p.F = F;
  return p;
}

TEST(StepContinuous, ConvergedAgentsIgnoreAdversaries) {
  std::vector<AgentInit> adv{
      {0, Role::kAdversary, make_vec({5, 5}), ConstantDrift{make_vec({3, -1})}},
      {0, Role::kAdversary, make_vec({-4, 2}), Sinusoid{make_vec({2, 2}), make_vec({1, 3}), make_vec({0, 1})}},
  };
  auto w = star_world(6, make_vec({0, 0}), adv);
  std::vector<FilterState> f(static_cast<std::size_t>(w.size()));
  const auto params = continuous_params(2);
  for (int k = 0; k < 200; ++k) {
    const auto rec = step_continuous(w, f, params);
    EXPECT_EQ(rec.agents.back().u_norm, 0.0);
    EXPECT_EQ(w.agents.back().tau(), make_vec({0, 0}));
  }
}

TEST(StepContinuous, FirstStepIsSaturated) {
  auto w = star_world(16, make_vec({2, 0}));
  std::vector<FilterState> f(static_cast<std::size_t>(w.size()));
  const auto rec = step_continuous(w, f, continuous_params(0));
  EXPECT_EQ(rec.step, 0);
  EXPECT_TRUE(rec.refresh);
  EXPECT_NEAR(rec.agents.back().u_norm, 1.0, 1e-15);
  EXPECT_NEAR(rec.agents.back().gamma, 0.5743, 1e-4);
  EXPECT_NEAR(w.agents.back().tau()[0], 2.0 - 0.01, 1e-15);
  EXPECT_EQ(w.agents.back().tau()[1], 0.0);
  EXPECT_EQ(w.step, 1);
  EXPECT_NEAR(w.time, 0.01, 1e-15);
}

TEST(StepContinuous, LeadersHold) {
  auto w = star_world(3, make_vec({4, 4}));
  std::vector<FilterState> f(static_cast<std::size_t>(w.size()));
  for (int k = 0; k < 50; ++k) step_continuous(w, f, continuous_params(0));
  for (int i = 0; i < 3; ++i) EXPECT_EQ(w.agents[static_cast<std::size_t>(i)].tau(), make_vec({0, 0}));
}

TEST(StepContinuous, SynchronousUpdate) {
  // Two followers that hear each other's level would be order dependent;
  // here agent 2 hears agent 1, both move in the same step from the snapshot.
  auto w = make_world({{}, {0}, {1}}, {{0, Role::kLeader, make_vec({0})},
                                       {1, Role::kNormal, make_vec({1})},
                                       {2, Role::kNormal, make_vec({1})}});
  std::vector<FilterState> f(3);
  step_continuous(w, f, continuous_params(0));
  EXPECT_NEAR(w.agents[1].tau()[0], 0.99, 1e-15);
  EXPECT_EQ(w.agents[2].tau()[0], 1.0);  // saw agent 1 co-located at the snapshot
}

TEST(StepContinuous, RetainedSetOnlyChangesAtRefresh) {
  std::vector<AgentInit> adv{
      {0, Role::kAdversary, make_vec({1, 0}), Sinusoid{make_vec({6, 0}), make_vec({0.7, 0}), make_vec({0, 0})}},
      {0, Role::kAdversary, make_vec({0, 1}), ConstantDrift{make_vec({0, 0.8})}},
  };
  auto w = star_world(7, make_vec({3, 3}), adv);
  std::vector<FilterState> f(static_cast<std::size_t>(w.size()));
  auto params = continuous_params(2);
  std::uint64_t prev = 0;
  for (int k = 0; k < 800; ++k) {
    const auto rec = step_continuous(w, f, params);
    EXPECT_EQ(rec.refresh, k % 10 == 0);
    const auto h = rec.agents.back().retained_hash;
    if (!rec.refresh) {
      EXPECT_EQ(h, prev) << "step " << k;
    }
    prev = h;
  }
}

TEST(StepDiscrete, ContractionAgainstStealthyShadows) {
  for (double e : {0.3, 2.0, 17.0}) {
    auto w = star_world(11, make_vec({e * 0.6, -e * 0.8}), stealthy(5, 1.0));
    std::vector<FilterState> f(static_cast<std::size_t>(w.size()));
    ControlParams p;
    p.F = 5;
    const auto rec = step_discrete(w, f, p);
    const auto& s = rec.agents.back();
    ASSERT_EQ(s.retained_count, 11);
    const double c = discrete_contraction_factor(s.gamma, 11, 5);
    const double next = w.agents.back().tau().norm();
    EXPECT_LE(next, c * e + 1e-12) << e;
  }
}

TEST(StepDiscrete, HonestNeighborStep) {
  auto w = make_world({{}, {0}}, {{0, Role::kLeader, make_vec({0.5, 0})}, {1, Role::kNormal, make_vec({0, 0})}});
  std::vector<FilterState> f(2);
  ControlParams p;
  step_discrete(w, f, p);
  EXPECT_EQ(w.agents[1].tau(), make_vec({0.5, 0}));
}

TEST(StepDiscrete, ZeroInputLeavesStateUnchanged) {
  auto w = star_world(4, make_vec({0, 0}));
  std::vector<FilterState> f(static_cast<std::size_t>(w.size()));
  ControlParams p;
  const auto before = w.agents.back().p;
  const auto rec = step_discrete(w, f, p);
  EXPECT_EQ(rec.agents.back().u_norm, 0.0);
  EXPECT_EQ(w.agents.back().p, before);
}

TEST(RunWorld, ZeroAgents) {
  World w;
  w.graph = std::make_shared<const Digraph>();
  const auto r = run_world(w, RunConfig{});
  EXPECT_TRUE(r.trace.empty());
  EXPECT_TRUE(r.report.agents.empty());
}

TEST(RunWorld, RendezvousWithoutAdversaries) {
  auto w = star_world(1, make_vec({3, -4}));
  RunConfig cfg;
  cfg.t_final = 30;
  const auto r = run_world(w, cfg);
  EXPECT_TRUE(r.report.passed());
  EXPECT_TRUE(r.report.all_converged);
  const auto& a = r.report.agents.back();
  ASSERT_TRUE(a.convergence_time.has_value());
  // Saturated travel for most of the 5 m, then the finite-time tail.
  EXPECT_GT(*a.convergence_time, 4.0);
  EXPECT_LT(*a.convergence_time, 8.0);
  ASSERT_TRUE(a.bound.has_value());
  EXPECT_LE(*a.convergence_time, *a.bound);
}

TEST(RunWorld, LyapunovMonotoneForLevelOne) {
  auto w = star_world(11, make_vec({6, 8}), stealthy(5, 0.7));
  RunConfig cfg;
  cfg.params.F = 5;
  cfg.t_final = 120;
  cfg.assertions.lyapunov_level1 = true;
  const auto r = run_world(w, cfg);
  for (const auto& a : r.report.assertions) EXPECT_TRUE(a.passed) << a.name << ": " << a.detail;
}

TEST(RunWorld, ThinningKeepsFullResolutionMetrics) {
  auto w = star_world(2, make_vec({1, 1}));
  RunConfig cfg;
  cfg.t_final = 5;
  cfg.convergence.stop_when_converged = false;
  const auto full = run_world(w, cfg);
  cfg.thin = 10;
  const auto thin = run_world(w, cfg);
  EXPECT_EQ(full.trace.size(), 501u);
  EXPECT_EQ(thin.trace.size(), 51u);
  EXPECT_EQ(full.errors, thin.errors);
  EXPECT_EQ(full.report.agents.back().convergence_time, thin.report.agents.back().convergence_time);
  for (const auto& rec : thin.trace) EXPECT_EQ(rec.step % 10, 0);
}

TEST(RunWorld, NonFiniteStateAborts) {
  auto w = star_world(2, make_vec({1, 1}));
  w.agents.back().p[0] = std::numeric_limits<double>::quiet_NaN();
  try {
    run_world(w, RunConfig{});
    FAIL() << "expected NumericError";
  } catch (const NumericError& e) {
    EXPECT_EQ(e.agent(), 2);
  }
}

TEST(RunWorld, Deterministic) {
  std::vector<AgentInit> adv{
      {0, Role::kAdversary, make_vec({1, 0}), Sinusoid{make_vec({6, 1}), make_vec({0.7, 0.2}), make_vec({0, 1})}},
      {0, Role::kAdversary, make_vec({0, 1}), StealthyShadow{0.4}},
  };
  auto w = star_world(7, make_vec({9, -3}), adv);
  RunConfig cfg;
  cfg.params.F = 2;
  const auto a = run_world(w, cfg);
  const auto b = run_world(w, cfg);
  EXPECT_EQ(a.errors, b.errors);
  ASSERT_EQ(a.trace.size(), b.trace.size());
  for (std::size_t k = 0; k < a.trace.size(); ++k) {
    for (std::size_t i = 0; i < a.trace[k].agents.size(); ++i) {
      EXPECT_EQ(a.trace[k].agents[i].tau, b.trace[k].agents[i].tau);
      EXPECT_EQ(a.trace[k].agents[i].retained_hash, b.trace[k].agents[i].retained_hash);
    }
  }
}

TEST(RunWorld, EulerConsistency) {
  // Unsaturated start so speed varies along the path; both still move at t = 2 s.
  auto base = make_world({{}, {}, {0, 1}, {0, 1, 2}},
                         {{0, Role::kLeader, make_vec({0, 0})},
                          {0, Role::kLeader, make_vec({0, 0})},
                          {1, Role::kNormal, make_vec({0.5, 0.3})},
                          {2, Role::kNormal, make_vec({-0.4, 0.6})}});
  std::vector<std::vector<Vec>> terminal;
  for (double dt : {0.01, 0.005, 0.0025}) {
    RunConfig cfg;
    cfg.params.dt = dt;
    cfg.params.eps_d = 0.1;
    cfg.t_final = 2.0;
    cfg.convergence.stop_when_converged = false;
    cfg.assertions = AssertionToggles::none();
    const auto r = run_world(base, cfg);
    std::vector<Vec> taus;
    for (const auto& a : r.final_world.agents) taus.push_back(a.tau());
    terminal.push_back(taus);
  }
  for (std::size_t i = 2; i < 4; ++i) {
    const double d1 = (terminal[0][i] - terminal[1][i]).norm();
    const double d2 = (terminal[1][i] - terminal[2][i]).norm();
    ASSERT_GT(d2, 0.0);
    EXPECT_GE(d1 / d2, 0.3) << i;
    EXPECT_LE(d1 / d2, 3.0) << i;
  }
}

TEST(Trace, RetainedHashIsOrderSensitiveFnv) {
  EXPECT_EQ(retained_set_hash({}), 14695981039346656037ull);
  EXPECT_NE(retained_set_hash({1, 2}), retained_set_hash({2, 1}));
  EXPECT_NE(retained_set_hash({1}), retained_set_hash({1, 0}));
}

}  // namespace
}  // namespace rdag
