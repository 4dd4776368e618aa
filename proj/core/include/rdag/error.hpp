#pragma once

#include <stdexcept>
#include <string>

namespace rdag {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad argument to a pure function (empty subset, k >= n, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Partition that is not a partition: overlapping, missing or out-of-range ids.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// Scenario or configuration rejected during loading / world setup.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message)
      : Error(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// A theorem hypothesis does not hold (R <= 2F, empty retained set on a live branch).
class HypothesisError : public Error {
 public:
  using Error::Error;
};

/// A precondition audit failed before a run (RDAG, F-local, 3F+1 in-degree).
class AuditError : public Error {
 public:
  AuditError(std::string audit, const std::string& message)
      : Error(audit + ": " + message), audit_(std::move(audit)) {}

  const std::string& audit() const noexcept { return audit_; }

 private:
  std::string audit_;
};

/// NaN/Inf detected in the state during integration.
class NumericError : public Error {
 public:
  NumericError(int agent, long long step, const std::string& message)
      : Error(message), agent_(agent), step_(step) {}

  int agent() const noexcept { return agent_; }
  long long step() const noexcept { return step_; }

 private:
  int agent_;
  long long step_;
};

}  // namespace rdag
