#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace epigrow {

/// Requested equilibrium does not exist for the given rates.
class NoEndemicState : public std::runtime_error {
 public:
  explicit NoEndemicState(const std::string& what) : std::runtime_error(what) {}
};

/// A steady-state regime is not attainable for the given (b, theta).
class RegimeUnavailable : public std::runtime_error {
 public:
  explicit RegimeUnavailable(const std::string& what) : std::runtime_error(what) {}
};

/// Linear system for co-states is singular (degenerate configuration).
class SingularSystem : public std::runtime_error {
 public:
  explicit SingularSystem(const std::string& what) : std::runtime_error(what) {}
};

/// Nonlinear solver failed to converge; carries the best residual seen.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double best_residual)
      : std::runtime_error(what), best_residual(best_residual) {}
  double best_residual;
};

/// Adaptive integration aborted; carries the last accepted state.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double last_t, std::vector<double> last_y)
      : std::runtime_error(what), last_t(last_t), last_y(std::move(last_y)) {}
  double last_t;
  std::vector<double> last_y;
};

/// Configuration file or preset problem.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace epigrow
