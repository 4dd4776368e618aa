#pragma once

#include <span>
#include <vector>

#include "rdag/dynamics.hpp"

namespace rdag {

struct ControlParams {
  double alpha = 0.8;       // finite-time exponent, 0 < alpha < 1
  double u_max = 1.0;       // speed bound [m/s] (per-step displacement bound in discrete mode)
  int F = 0;                // adversary bound
  double eps_d = 0.1;       // dwell time between filter refreshes [s]
  double eps_omega = 1e-9;  // co-location tolerance [m]
  double eps_sing = 1e-12;  // below this distance a term takes its limit value 0 [m]
  double dt = 0.01;         // integration step [s]

  /// eps_d / dt as an exact integer. Throws ConfigError if eps_d is not an integer multiple of dt.
  long long steps_per_dwell() const;

  /// Throws ConfigError naming the first bad field. `continuous` adds the alpha / eps_d / dt checks.
  void validate(bool continuous) const;
};

/// Per-agent retained in-neighbor set and the step index of its last refresh.
struct FilterState {
  std::vector<VertexId> retained;  // sorted by id
  long long last_update_index = -1;
};

/// Drops the F in-neighbors whose claimed tau is farthest from the receiver.
/// Among equal distances the smaller sender id is kept. Returns the retained
/// ids sorted ascending. F >= |measurements| yields an empty set (and a warning
/// when there was something to filter).
std::vector<VertexId> filter_neighbors(std::span<const Measurement> measurements, int F);

/// Refresh instants t = m eps_d, evaluated on step indices only.
bool dwell_gate(long long step, long long steps_per_dwell);

/// Float-facing convenience: converts t and eps_d to step counts first.
bool dwell_gate(double t, double dt, double eps_d);

/// In-neighbors whose claimed tau differs from the receiver's by more than eps_omega.
/// Taken over all of V_i, not just the retained set.
std::vector<VertexId> omega_set(std::span<const Measurement> measurements, double eps_omega);

struct Weight {
  VertexId sender;
  double w;

  friend bool operator==(const Weight&, const Weight&) = default;
};

using WeightMap = std::vector<Weight>;

/// Zero for every retained sender when |Omega_i| <= F, uniform 1/|R_i| otherwise.
/// Throws HypothesisError if the live branch meets an empty retained set.
WeightMap control_weights_continuous(std::span<const VertexId> retained, int omega_cardinality, int F);

/// Uniform 1/|R_i|. Throws HypothesisError on an empty retained set.
WeightMap control_weights_discrete(std::span<const VertexId> retained);

}  // namespace rdag
