#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "epigrow/dynamics.hpp"
#include "epigrow/model.hpp"

namespace epigrow {

/// Shadow values of (k, h, s, i, e).
struct CoStates {
  double lambda1 = 0.0, lambda2 = 0.0, lambda3 = 0.0, lambda4 = 0.0, lambda5 = 0.0;
};

/// KKT multipliers for the i, m, A, s >= 0 constraints.
struct Multipliers {
  double nu1 = 0.0, nu2 = 0.0, nu3 = 0.0, nu4 = 0.0;
};

enum class Regime { DiseaseFree, EndemicNoInvest, EndemicAOnly, EndemicMOnly, EndemicBoth };

std::string to_string(Regime r);
Regime regime_from_string(const std::string& s);

/// A full first-order-condition candidate point.
struct Candidate {
  PlannerState state;
  Controls controls;
  CoStates costates;
  Multipliers multipliers;
};

/// Stationarity, co-state, state and complementarity residuals evaluated
/// at a candidate. Components are fixed-order and individually named.
struct FocResiduals {
  static constexpr int kCount = 17;
  std::array<double, kCount> values{};
  bool multiplier_signs_ok = true;

  double max_norm() const;
  static const char* name(int index);
};

FocResiduals foc_residuals(const Model& model, const Candidate& candidate);

/**
 * Sensitivity coefficient of steady-state labor with respect to the
 * discount rate channel j (1 = investment, 2 = knowledge, 3 = health),
 * evaluated at the endemic state induced by (A, e, h).
 *
 * Throws NoEndemicState when (1-p)beta <= b + gamma at (A, e, h) and
 * SingularSystem when the denominator is not positive.
 */
double l_theta(const Model& model, int j, double A, double e, double h);

/// Same, with explicit discount rate and birth rate (used by threshold
/// scans, which vary theta at fixed forms).
double l_theta_at(const Model& model, int j, double A, double e, double h, double theta,
                  double b);

/// Steady-state labor floor at zero investment; the default uses the
/// endemic fractions (denominator gamma_floor + b). The alternate form
/// with denominator gamma_floor is kept for comparison.
double labor_floor(const Model& model, double b, bool alternate_display = false);

struct CostateSolve {
  CoStates costates;
  Multipliers multipliers;
  double closed_form_gap = 0.0;  ///< matrix nu2/nu3 vs closed forms, relative
  double det_residual = 0.0;     ///< numeric det vs factored closed form, relative
};

/**
 * Solves the 6x6 linear system for (lambda2..lambda5, nu2, nu3) at an
 * endemic steady state, with lambda1 = u'(c) and nu1 = nu4 = 0. Also
 * evaluates the closed forms for nu2 and nu3 and the factored determinant,
 * reporting the relative disagreement of the two routes.
 */
CostateSolve costates_and_multipliers(const Model& model, const PlannerState& state,
                                      const Controls& controls);

struct SteadyStateSolution {
  Regime regime = Regime::DiseaseFree;
  PlannerState state;
  Controls controls;
  CoStates costates;
  Multipliers multipliers;
  double residual_norm = 0.0;
  bool unique = true;
  bool kkt_ok = true;      ///< multiplier signs and complementarity hold
  bool epi_stable = true;  ///< epidemic block is stable at this point
  double costate_gap = 0.0;
  double det_residual = 0.0;
  double b = 0.0;
  double theta = 0.0;
};

/// Steady state with no disease and no health or control spending
/// (m = h = A = e = 0, s = 1-p, i = 0, l = 1).
SteadyStateSolution solve_disease_free_ss(const Model& model);

struct ThetaThresholds {
  double theta1 = 0.0;  ///< health-expenditure switch point (largest root)
  double theta2 = 0.0;  ///< control-investment switch point (largest root)
  bool theta1_found = false;
  bool theta2_found = false;
  std::vector<double> theta1_roots;
  std::vector<double> theta2_roots;
  double theta_max = 0.0;  ///< max(found roots, 0)
  double theta_min = 0.0;  ///< min over found roots (NaN when none found)

  bool theta1_unique() const { return theta1_roots.size() == 1; }
  bool theta2_unique() const { return theta2_roots.size() == 1; }
};

/**
 * Scans and solves the two discount-rate threshold equations at zero
 * investment. The scan covers theta in (mu - delta_K - b, 1], skipping
 * points where the labor sensitivity is undefined, and it excludes the
 * vertical asymptote of the investment equation when the knowledge form
 * has a positive investment-only origin slope.
 */
ThetaThresholds theta_thresholds(const Model& model, double b);

SteadyStateSolution solve_endemic_no_invest(const Model& model, double b, double theta);

/// The zero-spending endemic branch without multiplier sign gating; the
/// no-control counterfactual used by parameter sweeps.
SteadyStateSolution endemic_no_invest_candidate(const Model& model, double b, double theta);
SteadyStateSolution solve_endemic_A_only(const Model& model, double b, double theta);
SteadyStateSolution solve_endemic_m_only(const Model& model, double b, double theta);
std::vector<SteadyStateSolution> solve_endemic_both(const Model& model, double b, double theta);

struct RejectedRegime {
  Regime regime;
  std::string reason;
};

struct Classification {
  std::vector<SteadyStateSolution> solutions;  ///< KKT-consistent and epi-stable
  std::vector<RejectedRegime> rejected;
  Regime predicted = Regime::DiseaseFree;
  bool endemic_window = false;
  std::optional<ThetaThresholds> thresholds;
};

/// Attempts every regime at (b, theta) and reports the consistent ones
/// together with the regime the thresholds predict.
Classification classify_steady_state(const Model& model, double b, double theta);

struct MonotonicityClaim {
  std::string name;
  bool pass = true;
  std::string witness;  ///< first violating grid point, empty when pass
};

struct MonotonicityReport {
  std::vector<MonotonicityClaim> claims;
  bool all_pass = true;
};

/**
 * Verifies, on a (A, e, h) grid with every point endemic, that
 * g'(m*(h)) is nonincreasing in h, l* and k* are nondecreasing in each
 * coordinate, f2(k*, l*) is nonincreasing, and f1(k*, l*) stays pinned at
 * theta + delta_K + b - mu to 1e-10.
 */
MonotonicityReport comparative_statics_check(const Model& model,
                                             const std::vector<double>& A_grid,
                                             const std::vector<double>& e_grid,
                                             const std::vector<double>& h_grid);

}  // namespace epigrow
