#pragma once

#include <cmath>
#include <functional>
#include <random>

// Shared test oracles: finite differences and admissible random draws.
// These stay independent of the analytic derivative paths they check.

namespace testing {

/// Central finite difference with relative step (default 1e-6).
inline double central_diff(const std::function<double(double)>& f, double x,
                           double rel_step = 1e-6) {
  const double h = rel_step * std::max(1.0, std::abs(x));
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// Mixed relative/absolute agreement check. The absolute term covers the
/// cancellation noise of a central difference (about eps/step), below
/// which small derivatives cannot be resolved relatively.
inline bool close_rel(double a, double b, double rel_tol, double abs_tol = 1e-9) {
  return std::abs(a - b) <= rel_tol * std::max(std::abs(a), std::abs(b)) + abs_tol;
}

inline std::mt19937& rng() {
  static std::mt19937 gen(987654321u);
  return gen;
}

inline double uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng());
}

}  // namespace testing
