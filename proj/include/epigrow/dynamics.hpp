#pragma once

#include <array>
#include <functional>

#include "epigrow/model.hpp"
#include "epigrow/ode.hpp"

namespace epigrow {

/// Population fractions (s, i, r, v); sums to 1 up to integrator tolerance.
struct EpiState {
  double s = 1.0, i = 0.0, r = 0.0, v = 0.0;
  double sum() const { return s + i + r + v; }
};

/// Head counts, S + I + R + V = N.
struct RawState {
  double S = 0.0, I = 0.0, R = 0.0, V = 0.0, N = 0.0;
};

/// Planner state: capital, health, susceptible/infected fractions, knowledge.
struct PlannerState {
  double k = 1.0, h = 0.0, s = 1.0, i = 0.0, e = 0.0;
  double labor() const { return 1.0 - i; }
};

/// Control bundle at a point in time.
struct Controls {
  double c = 0.0, m = 0.0, A = 0.0;
};

/// Controls as a function of time; constant controls are the common case.
using ControlPath = std::function<Controls(double t)>;

inline ControlPath constant_controls(Controls u) {
  return [u](double) { return u; };
}

/// Fraction SIRV right-hand side at given scalar rates; components sum to
/// b*(1 - s - i - r - v), hence exactly zero on the simplex.
std::array<double, 4> epi_rhs(const EpiState& y, double beta, double gamma,
                              const ModelParams& params);

/// Head-count SIRV right-hand side, (dS, dI, dR, dV, dN); the first four
/// sum to dN identically. Throws std::domain_error when N <= 0.
std::array<double, 5> raw_rhs(const RawState& y, double beta, double gamma,
                              const ModelParams& params);

/// Five-state planner right-hand side (dk, dh, ds, di, de) with rates
/// evaluated at (A, e, h). Throws std::domain_error when k <= 0.
std::array<double, 5> coupled_rhs(const PlannerState& y, const Controls& u, const Model& model);

/// Guard for fraction-valued components: clamps undershoots within
/// 10*tol to zero and throws IntegrationError beyond that.
StateGuard fraction_guard(double tol);

/// Integrates the fraction system with constant (A, e, h) determining the
/// rates through the model forms.
Trajectory simulate_fractions(const Model& model, const EpiState& y0, double A, double e,
                              double h, double t1, int n_samples, const OdeOptions& opts = {});

/// Integrates the raw system under the same constant rates.
Trajectory simulate_raw(const Model& model, const RawState& y0, double A, double e, double h,
                        double t1, int n_samples, const OdeOptions& opts = {});

/// Integrates the planner system under a control path.
Trajectory simulate_planner(const Model& model, const PlannerState& y0, const ControlPath& u,
                            double t1, int n_samples, const OdeOptions& opts = {});

/**
 * Integrates the raw and fraction systems from consistent initial
 * conditions (s0 = S0/N0, ...) and returns the maximum over sample times
 * and components of |X/N - x|.
 */
double check_raw_fraction_consistency(const Model& model, const RawState& y0, double A,
                                      double e, double h, double horizon, int n_samples,
                                      const OdeOptions& opts = {});

}  // namespace epigrow
