#include "rdag/analysis.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numbers>

#include "rdag/error.hpp"

namespace rdag {

std::optional<long long> convergence_step(std::span<const double> errors, double delta, int window) {
  if (window < 0) throw ParameterError("convergence window must be >= 0");
  const auto n = static_cast<long long>(errors.size());
  const long long need = static_cast<long long>(window) + 1;
  long long run = 0;
  for (long long k = 0; k < n; ++k) {
    run = errors[static_cast<std::size_t>(k)] <= delta ? run + 1 : 0;
    if (run == need) return k - window;
  }
  return std::nullopt;
}

std::optional<double> convergence_time(std::span<const double> errors, double dt, double delta, int window) {
  const auto step = convergence_step(errors, delta, window);
  if (!step) return std::nullopt;
  return static_cast<double>(*step) * dt;
}

double continuous_rate_constant(double gamma_star, int R, int F) {
  if (R <= 2 * F) throw HypothesisError(fmt::format("rate constant needs R > 2F (R = {}, F = {})", R, F));
  if (!(gamma_star > 0.0 && gamma_star <= 1.0)) throw ParameterError("gamma* must lie in (0, 1]");
  return gamma_star * static_cast<double>(R - 2 * F) / static_cast<double>(R);
}

double continuous_T1_bound(double e0, double gamma_star, int R, int F, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("alpha must lie in (0, 1)");
  if (!(e0 >= 0.0)) throw ParameterError("initial error must be >= 0");
  const double c = continuous_rate_constant(gamma_star, R, F);
  return std::pow(e0, 1.0 - alpha) / (c * (1.0 - alpha));
}

double discrete_contraction_factor(double gamma_star, int R, int F) {
  if (R <= 2 * F) throw HypothesisError(fmt::format("contraction needs R > 2F (R = {}, F = {})", R, F));
  if (!(gamma_star > 0.0 && gamma_star <= 1.0)) throw ParameterError("gamma* must lie in (0, 1]");
  return 1.0 - gamma_star * static_cast<double>(R - 2 * F) / static_cast<double>(R);
}

double geometric_series_envelope(double b0, double c, double beta) {
  if (!(b0 >= 0.0)) throw ParameterError("b0 must be >= 0");
  if (!(c > 0.0 && c < 1.0)) throw ParameterError("c must lie in (0, 1)");
  if (!(beta > c && beta < 1.0)) {
    throw ParameterError(fmt::format("need c < beta < 1 (c = {}, beta = {})", c, beta));
  }
  return b0 / (std::numbers::e * std::log(beta / c));
}

}  // namespace rdag
