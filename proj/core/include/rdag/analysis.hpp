#pragma once

#include <optional>
#include <span>

namespace rdag {

/// First index k such that errors[k..k+window] are all <= delta. The window
/// must fit inside the series, so a trailing dip that is too short does not count.
std::optional<long long> convergence_step(std::span<const double> errors, double delta, int window);

/// convergence_step scaled by the record spacing `dt` (1 for discrete runs).
std::optional<double> convergence_time(std::span<const double> errors, double dt, double delta, int window);

/// Rate constant gamma* (R - 2F) / R of the finite-time decay. Throws HypothesisError when R <= 2F.
double continuous_rate_constant(double gamma_star, int R, int F);

/// Upper bound e0^(1 - alpha) / (c (1 - alpha)) on the time a level-1 agent
/// needs to reach the leaders' tau, with c = continuous_rate_constant(gamma_star, R, F).
double continuous_T1_bound(double e0, double gamma_star, int R, int F, double alpha);

/// Per-step worst-case contraction 1 - gamma* (R - 2F) / R of the discrete law.
double discrete_contraction_factor(double gamma_star, int R, int F);

/// Smallest constant A with k c^k b0 <= A beta^k for every k >= 0:
/// A = b0 / (e ln(beta / c)). Requires 0 < c < beta < 1 and b0 >= 0.
double geometric_series_envelope(double b0, double c, double beta);

}  // namespace rdag
