#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "epigrow/csv.hpp"
#include "epigrow/equilibria.hpp"
#include "epigrow/planner.hpp"

namespace epigrow {

/// One steady state along a sweep; ok = false marks a per-point failure
/// (the sweep continues).
struct SweepRow {
  double b = 0.0;
  double theta = 0.0;
  bool ok = false;
  std::string note;  ///< failure reason or regime remarks, comma-free
  std::optional<SteadyStateSolution> solution;
  double output = 0.0;  ///< y* = f(k*, l*)
};

enum class SweepMode {
  WithControl,  ///< classify every point, emit each consistent solution
  NoControl,    ///< pin m = A = 0: the no-spending counterfactual branches
};

/**
 * Discount-rate sweep at fixed b. NoControl emits, per theta, the
 * disease-free branch and (when the endemic window is open) the pinned
 * zero-spending endemic branch. WithControl emits every consistent
 * solution from classify_steady_state.
 */
std::vector<SweepRow> theta_sweep(const Model& model, double b, std::span<const double> thetas,
                                  SweepMode mode, int jobs = 1);

/// Birth-rate sweep at fixed theta: the zero-spending endemic branch where
/// the endemic window is open, the disease-free branch elsewhere.
std::vector<SweepRow> b_sweep(const Model& model, std::span<const double> bs, double theta,
                              int jobs = 1);

/// Default sweep grid: n log-spaced points in [lo, hi].
std::vector<double> log_grid(double lo, double hi, int n);
std::vector<double> linear_grid(double lo, double hi, int n);

/// Transmission-rate bifurcation data for the model's rates at zero
/// investment: sweeps beta over [scale_lo, scale_hi] * (b + gamma_floor) / (1 - p).
std::vector<BifurcationRow> bifurcation_data(const Model& model, int n, double scale_lo = 0.2,
                                             double scale_hi = 3.0);

/// CSV renderings (stable column schemas).
CsvTable sweep_table(const std::vector<SweepRow>& rows);
CsvTable bifurcation_table(const std::vector<BifurcationRow>& rows);

/// Human-readable summary of a classification: which regime the
/// thresholds predict and which solutions were kept or rejected.
std::string classification_summary(const Classification& c);

}  // namespace epigrow
