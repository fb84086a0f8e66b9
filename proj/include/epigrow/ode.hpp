#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace epigrow {

/// dy/dt = f(t, y); writes the derivative into dy (same length as y).
using OdeRhs = std::function<void(double t, std::span<const double> y, std::span<double> dy)>;

/// Optional hook applied to the state after every accepted step
/// (used to clamp tiny negative undershoots or reject bad states).
using StateGuard = std::function<void(double t, std::span<double> y)>;

enum class OdeMethod {
  DormandPrince54,  ///< adaptive embedded 5(4) pair with dense output
  ClassicRK4,       ///< fixed-step order 4, exact landing on sample times
};

struct OdeOptions {
  OdeMethod method = OdeMethod::DormandPrince54;
  double tol = 1e-8;        ///< absolute and relative local error target
  double fixed_step = 0.0;  ///< ClassicRK4 only; <= 0 means span/2000
  long max_steps = 5'000'000;
  StateGuard guard;
};

/// Integration output sampled at caller-requested times.
struct Trajectory {
  std::vector<double> t;
  std::vector<std::vector<double>> y;  ///< y[k] is the state at t[k]

  struct Stats {
    std::string method;
    double tol = 0.0;
    long steps_accepted = 0;
    long steps_rejected = 0;
    long rhs_evaluations = 0;
  } stats;
};

/**
 * Integrates y' = rhs over [t0, t1], producing states at sample_times
 * (must be non-decreasing and lie within [t0, t1]).
 *
 * The adaptive method keeps the per-step local error estimate below
 * opts.tol and evaluates samples with its order-4 dense interpolant.
 * Throws IntegrationError (with the last accepted state) on step-size
 * underflow or when max_steps is exceeded; std::invalid_argument for a
 * tol outside [1e-12, 1e-3].
 */
Trajectory integrate(const OdeRhs& rhs, std::span<const double> y0, double t0, double t1,
                     std::span<const double> sample_times, const OdeOptions& opts = {});

/// Convenience: n_samples uniformly spaced samples including both ends.
Trajectory integrate_uniform(const OdeRhs& rhs, std::span<const double> y0, double t0,
                             double t1, int n_samples, const OdeOptions& opts = {});

}  // namespace epigrow
