#pragma once

#include <span>

#include "rdag/resilience.hpp"

namespace rdag {

struct ControlOutput {
  Vec u;                  // applied input, ||u|| <= u_max
  double u_p_norm = 0.0;  // nominal input norm before saturation
  double gamma = 1.0;     // min(||u_p||, u_max) / ||u_p||; 1 when u_p = 0
};

/// Scales u_p onto the ball of radius u_max without rotating it.
ControlOutput saturate(const Vec& u_p, double u_max);

/// Finite-time law: u_p = sum_j w_ij (tau_j - tau_i) ||tau_j - tau_i||^(alpha - 1),
/// then saturated. Terms closer than eps_sing contribute their limit, zero.
/// `weights` name the retained senders; each must have a measurement.
ControlOutput continuous_control(std::span<const Measurement> measurements, std::span<const Weight> weights,
                                 const ControlParams& params, int dimension);

/// Saturated weighted mean displacement. Empty weights give a zero input and a warning.
ControlOutput discrete_control(std::span<const Measurement> measurements, std::span<const Weight> weights,
                               double u_max, int dimension);

}  // namespace rdag
