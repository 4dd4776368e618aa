#include "rdag/control.hpp"

#include <fmt/format.h>
#include "log.hpp"

#include <algorithm>
#include <cmath>

#include "rdag/error.hpp"

namespace rdag {

namespace {

const Measurement& find_measurement(std::span<const Measurement> measurements, VertexId sender) {
  const auto it = std::lower_bound(measurements.begin(), measurements.end(), sender,
                                   [](const Measurement& m, VertexId id) { return m.sender < id; });
  if (it == measurements.end() || it->sender != sender) {
    throw ParameterError(fmt::format("weight names sender {} with no measurement", sender));
  }
  return *it;
}

}  // namespace

ControlOutput saturate(const Vec& u_p, double u_max) {
  ControlOutput out;
  out.u_p_norm = u_p.norm();
  if (out.u_p_norm > u_max) {
    out.gamma = u_max / out.u_p_norm;
    out.u = out.gamma * u_p;
  } else {
    out.gamma = 1.0;
    out.u = u_p;
  }
  return out;
}

ControlOutput continuous_control(std::span<const Measurement> measurements, std::span<const Weight> weights,
                                 const ControlParams& params, int dimension) {
  Vec u_p = Vec::Zero(dimension);
  for (const auto& [sender, w] : weights) {
    if (w == 0.0) continue;
    const Vec& d = find_measurement(measurements, sender).relative;
    const double dist = d.norm();
    if (dist < params.eps_sing) continue;
    u_p += (w * std::pow(dist, params.alpha - 1.0)) * d;
  }
  return saturate(u_p, params.u_max);
}

ControlOutput discrete_control(std::span<const Measurement> measurements, std::span<const Weight> weights,
                               double u_max, int dimension) {
  Vec u_p = Vec::Zero(dimension);
  if (weights.empty()) {
    if (!measurements.empty()) {
      detail::log().warn("discrete control: empty retained set for agent {}; input held at zero", measurements[0].receiver);
    }
    return saturate(u_p, u_max);
  }
  for (const auto& [sender, w] : weights) u_p += w * find_measurement(measurements, sender).relative;
  return saturate(u_p, u_max);
}

}  // namespace rdag
