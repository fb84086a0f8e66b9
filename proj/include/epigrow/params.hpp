#pragma once

namespace epigrow {

/**
 * Demographic and economic constants shared by the epidemic and growth
 * blocks. Rates are per unit time; p is the vaccinated fraction at
 * recruitment.
 */
struct ModelParams {
  double b = 0.0482;       ///< natural birth rate
  double mu = 0.005;       ///< natural death rate
  double p = 0.5;          ///< vaccinated fraction at recruitment
  double theta = 0.05;     ///< planner discount rate
  double delta_K = 0.05;   ///< physical capital depreciation
  double delta_H = 0.05;   ///< health capital depreciation
  double delta_E = 0.05;   ///< knowledge depreciation

  /// Throws std::invalid_argument when a basic invariant fails
  /// (b >= mu, p in [0,1], theta > 0, depreciations in (0,1), b, mu > 0).
  void validate() const;
};

}  // namespace epigrow
