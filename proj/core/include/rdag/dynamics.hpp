#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "rdag/graph.hpp"
#include "rdag/types.hpp"

namespace rdag {

enum class Role { kLeader, kNormal, kAdversary };

std::string_view to_string(Role role);

struct AgentState {
  VertexId id = 0;
  int level = 0;
  Role role = Role::kNormal;
  Vec p;   // position [m]
  Vec xi;  // formation offset [m]

  /// Formation coordinate; the only quantity controllers ever see.
  Vec tau() const { return p - xi; }
};

// ---- adversary signal models -------------------------------------------

/// tau(t) = tau0 + velocity * t
struct ConstantDrift {
  Vec velocity;
};

/// Per axis: tau(t) = tau0 + A (sin(2 pi f t + phase) - sin(phase)).
/// The offset term pins tau(0) = tau0 so the signal is continuous from the start.
struct Sinusoid {
  Vec amplitude;
  Vec frequency;  // Hz
  Vec phase;      // rad
};

/// Per receiver: claims tau_i + gain (tau_i - tau_L), i.e. a point at distance
/// gain * ||tau_i - tau_L|| on the far side of the receiver from the leaders.
/// With gain <= 1 the claim is never farther than the leaders, so the norm
/// filter keeps it.
struct StealthyShadow {
  double gain = 1.0;
};

/// A different sinusoid per out-neighbor; receivers without an entry get `fallback`.
struct PerEdgeByzantine {
  std::map<VertexId, Sinusoid> per_receiver;
  Sinusoid fallback;
};

using AdversaryStrategy = std::variant<ConstantDrift, Sinusoid, StealthyShadow, PerEdgeByzantine>;

/// True when every receiver observes the same signal (the adversary has a
/// single well-defined trajectory).
bool is_broadcast(const AdversaryStrategy& strategy);

/// Declared bound L with ||s(t + h) - s(t)|| <= L h. For StealthyShadow the
/// signal follows the receiver, so the bound uses the receiver speed bound.
double lipschitz_bound(const AdversaryStrategy& strategy, double receiver_speed_bound);

Vec evaluate_sinusoid(const Sinusoid& s, const Vec& tau0, double t);

/// tau value the adversary claims to `receiver` at time t.
Vec emitted_tau(const AdversaryStrategy& strategy, const Vec& tau0, double t, VertexId receiver,
                const Vec& receiver_tau, const Vec& tau_leader);

// ---- world -------------------------------------------------------------

enum class AdversaryMode {
  kCommunication,  // adversaries stay put and only transmit false tau
  kPhysical,       // broadcast-strategy adversaries physically follow their signal
};

struct World {
  std::shared_ptr<const Digraph> graph;
  int dimension = 2;
  long long step = 0;
  double time = 0.0;
  std::vector<AgentState> agents;                          // indexed by id
  std::vector<std::optional<AdversaryStrategy>> strategy;  // set for adversaries only
  std::vector<Vec> tau0;                                   // initial tau of every agent
  AdversaryMode adversary_mode = AdversaryMode::kCommunication;
  Vec tau_leader;                                          // reference handed to StealthyShadow

  int size() const noexcept { return static_cast<int>(agents.size()); }
};

struct Measurement {
  VertexId receiver = 0;
  VertexId sender = 0;
  Vec relative;  // claimed tau_sender - tau_receiver
};

/// One measurement per in-neighbor of `receiver`, ordered by sender id.
std::vector<Measurement> measure(const World& world, VertexId receiver, double t);

/// Allocation-free variant used by the engine; `out` is resized and overwritten.
void measure_into(const World& world, VertexId receiver, double t, std::vector<Measurement>& out);

/// Component-wise mean of the behaving leaders' tau. Throws ConfigError when
/// there is no behaving leader or two of them are farther apart than `tolerance`.
Vec leader_reference(const World& world, double tolerance = 1e-9);

/// xi_k = center + radius (cos 2 pi k / n, sin 2 pi k / n), k = 0..n-1.
std::vector<Vec> formation_offsets_circle(int n_points, double radius, const Vec& center);

}  // namespace rdag
