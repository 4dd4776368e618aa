#include "rdag/dynamics.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numbers>

#include "rdag/error.hpp"

namespace rdag {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

double sinusoid_lipschitz(const Sinusoid& s) {
  double sq = 0.0;
  for (Eigen::Index k = 0; k < s.amplitude.size(); ++k) {
    const double rate = std::abs(s.amplitude[k]) * 2.0 * std::numbers::pi * std::abs(s.frequency[k]);
    sq += rate * rate;
  }
  return std::sqrt(sq);
}

}  // namespace

std::string_view to_string(Role role) {
  switch (role) {
    case Role::kLeader:
      return "leader";
    case Role::kNormal:
      return "normal";
    case Role::kAdversary:
      return "adversary";
  }
  return "unknown";
}

bool is_broadcast(const AdversaryStrategy& strategy) {
  return std::holds_alternative<ConstantDrift>(strategy) || std::holds_alternative<Sinusoid>(strategy);
}

double lipschitz_bound(const AdversaryStrategy& strategy, double receiver_speed_bound) {
  return std::visit(overloaded{
                        [](const ConstantDrift& s) { return s.velocity.norm(); },
                        [](const Sinusoid& s) { return sinusoid_lipschitz(s); },
                        [&](const StealthyShadow& s) { return (1.0 + std::abs(s.gain)) * receiver_speed_bound; },
                        [](const PerEdgeByzantine& s) {
                          double l = sinusoid_lipschitz(s.fallback);
                          for (const auto& [id, sig] : s.per_receiver) l = std::max(l, sinusoid_lipschitz(sig));
                          return l;
                        },
                    },
                    strategy);
}

Vec evaluate_sinusoid(const Sinusoid& s, const Vec& tau0, double t) {
  Vec out = tau0;
  for (Eigen::Index k = 0; k < out.size(); ++k) {
    out[k] += s.amplitude[k] * (std::sin(2.0 * std::numbers::pi * s.frequency[k] * t + s.phase[k]) - std::sin(s.phase[k]));
  }
  return out;
}

Vec emitted_tau(const AdversaryStrategy& strategy, const Vec& tau0, double t, VertexId receiver,
                const Vec& receiver_tau, const Vec& tau_leader) {
  return std::visit(overloaded{
                        [&](const ConstantDrift& s) -> Vec { return tau0 + s.velocity * t; },
                        [&](const Sinusoid& s) -> Vec { return evaluate_sinusoid(s, tau0, t); },
                        [&](const StealthyShadow& s) -> Vec {
                          return receiver_tau + s.gain * (receiver_tau - tau_leader);
                        },
                        [&](const PerEdgeByzantine& s) -> Vec {
                          const auto it = s.per_receiver.find(receiver);
                          return evaluate_sinusoid(it == s.per_receiver.end() ? s.fallback : it->second, tau0, t);
                        },
                    },
                    strategy);
}

void measure_into(const World& world, VertexId receiver, double t, std::vector<Measurement>& out) {
  const auto in = world.graph->in_neighbors(receiver);
  const Vec tau_i = world.agents[static_cast<std::size_t>(receiver)].tau();
  out.resize(in.size());
  for (std::size_t k = 0; k < in.size(); ++k) {
    const VertexId j = in[k];
    const auto& sender = world.agents[static_cast<std::size_t>(j)];
    auto& m = out[k];
    m.receiver = receiver;
    m.sender = j;
    if (sender.role == Role::kAdversary && world.strategy[static_cast<std::size_t>(j)]) {
      m.relative = emitted_tau(*world.strategy[static_cast<std::size_t>(j)], world.tau0[static_cast<std::size_t>(j)], t,
                               receiver, tau_i, world.tau_leader) -
                   tau_i;
    } else {
      m.relative = sender.tau() - tau_i;
    }
  }
}

std::vector<Measurement> measure(const World& world, VertexId receiver, double t) {
  std::vector<Measurement> out;
  measure_into(world, receiver, t, out);
  return out;
}

Vec leader_reference(const World& world, double tolerance) {
  std::vector<Vec> taus;
  for (const auto& a : world.agents) {
    if (a.role == Role::kLeader) taus.push_back(a.tau());
  }
  if (taus.empty()) throw ConfigError("roles", "no behaving leader: the formation reference is undefined");
  for (std::size_t a = 0; a < taus.size(); ++a) {
    for (std::size_t b = a + 1; b < taus.size(); ++b) {
      const double gap = (taus[a] - taus[b]).norm();
      if (gap > tolerance) {
        throw ConfigError("initial_conditions",
                          fmt::format("behaving leaders disagree on tau by {:.3e} m (tolerance {:.3e})", gap, tolerance));
      }
    }
  }
  Vec mean = Vec::Zero(taus.front().size());
  for (const auto& v : taus) mean += v;
  return mean / static_cast<double>(taus.size());
}

std::vector<Vec> formation_offsets_circle(int n_points, double radius, const Vec& center) {
  if (n_points < 1) throw ParameterError("formation needs at least one point");
  if (radius < 0.0) throw ParameterError("formation radius must be >= 0");
  if (center.size() != 2) throw ParameterError("circle formation is planar: center must have two coordinates");
  std::vector<Vec> out;
  out.reserve(static_cast<std::size_t>(n_points));
  for (int k = 0; k < n_points; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / n_points;
    out.push_back(center + radius * make_vec({std::cos(theta), std::sin(theta)}));
  }
  return out;
}

}  // namespace rdag
