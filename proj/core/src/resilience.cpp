#include "rdag/resilience.hpp"

#include <fmt/format.h>
#include "log.hpp"

#include <algorithm>
#include <cmath>

#include "rdag/error.hpp"

namespace rdag {

long long ControlParams::steps_per_dwell() const {
  if (!(dt > 0.0)) throw ConfigError("dt", "must be > 0");
  if (!(eps_d > 0.0)) throw ConfigError("eps_d", "must be > 0");
  const double ratio = eps_d / dt;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * rounded) {
    throw ConfigError("eps_d", fmt::format("eps_d = {} is not an integer multiple of dt = {}", eps_d, dt));
  }
  return static_cast<long long>(rounded);
}

void ControlParams::validate(bool continuous) const {
  if (!(u_max > 0.0) || !std::isfinite(u_max)) throw ConfigError("params.u_max", "must be finite and > 0");
  if (F < 0) throw ConfigError("params.F", "must be >= 0");
  if (!(eps_omega >= 0.0)) throw ConfigError("params.eps_omega", "must be >= 0");
  if (!continuous) return;
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("params.alpha", "must lie in (0, 1)");
  if (!(eps_sing > 0.0)) throw ConfigError("params.eps_sing", "must be > 0");
  steps_per_dwell();
}

std::vector<VertexId> filter_neighbors(std::span<const Measurement> measurements, int F) {
  if (F < 0) throw ParameterError("F must be >= 0");
  const auto n = measurements.size();
  if (static_cast<std::size_t>(F) >= n) {
    if (n > 0) detail::log().warn("filter: F = {} >= |V_i| = {} for agent {}; nothing retained", F, n, measurements[0].receiver);
    return {};
  }

  struct Key {
    double distance;
    VertexId sender;
  };
  std::vector<Key> keys;
  keys.reserve(n);
  for (const auto& m : measurements) keys.push_back({m.relative.norm(), m.sender});
  // Ascending (distance, id): the first n - F entries survive.
  std::sort(keys.begin(), keys.end(), [](const Key& a, const Key& b) {
    return a.distance != b.distance ? a.distance < b.distance : a.sender < b.sender;
  });

  std::vector<VertexId> retained;
  retained.reserve(n - static_cast<std::size_t>(F));
  for (std::size_t k = 0; k < n - static_cast<std::size_t>(F); ++k) retained.push_back(keys[k].sender);
  std::sort(retained.begin(), retained.end());
  return retained;
}

bool dwell_gate(long long step, long long steps_per_dwell) {
  if (steps_per_dwell < 1) throw ParameterError("steps_per_dwell must be >= 1");
  return step >= 0 && step % steps_per_dwell == 0;
}

bool dwell_gate(double t, double dt, double eps_d) {
  ControlParams p;
  p.dt = dt;
  p.eps_d = eps_d;
  const long long per = p.steps_per_dwell();
  const double steps = t / dt;
  const long long step = std::llround(steps);
  if (std::abs(steps - static_cast<double>(step)) > 1e-6) throw ParameterError("t is not an integer multiple of dt");
  return dwell_gate(step, per);
}

std::vector<VertexId> omega_set(std::span<const Measurement> measurements, double eps_omega) {
  std::vector<VertexId> out;
  for (const auto& m : measurements) {
    if (m.relative.norm() > eps_omega) out.push_back(m.sender);
  }
  return out;
}

WeightMap control_weights_continuous(std::span<const VertexId> retained, int omega_cardinality, int F) {
  WeightMap out;
  out.reserve(retained.size());
  if (omega_cardinality <= F) {
    for (VertexId j : retained) out.push_back({j, 0.0});
    return out;
  }
  if (retained.empty()) {
    throw HypothesisError(fmt::format("|Omega_i| = {} > F = {} but the retained set is empty", omega_cardinality, F));
  }
  const double w = 1.0 / static_cast<double>(retained.size());
  for (VertexId j : retained) out.push_back({j, w});
  return out;
}

WeightMap control_weights_discrete(std::span<const VertexId> retained) {
  if (retained.empty()) throw HypothesisError("discrete weights need a nonempty retained set");
  WeightMap out;
  out.reserve(retained.size());
  const double w = 1.0 / static_cast<double>(retained.size());
  for (VertexId j : retained) out.push_back({j, w});
  return out;
}

}  // namespace rdag
