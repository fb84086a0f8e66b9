#pragma once

#include <string>
#include <vector>

#include "epigrow/forms.hpp"
#include "epigrow/params.hpp"

namespace epigrow {

/// Functional-form configuration for one model instance.
struct ModelSpecs {
  TransmissionSpec beta;
  RecoverySpec gamma;
  KnowledgeSpec knowledge;
  ProductionSpec production;
  UtilitySpec utility;
};

/// A fully configured model: parameters plus functional forms.
struct Model {
  ModelParams params;
  ModelSpecs specs;

  /// Validates params and every spec; throws std::invalid_argument.
  void validate() const;

  RateEval beta(double A, double e, double h) const { return beta_eval(specs.beta, A, e, h); }
  RateEval gamma(double A, double e, double h) const { return gamma_eval(specs.gamma, A, e, h); }
  KnowledgeEval knowledge(double A, double e) const { return knowledge_eval(specs.knowledge, A, e); }
  ProductionEval production(double k, double l) const { return production_eval(specs.production, k, l); }
  HealthEval health(double m) const { return health_eval(specs.production, m); }
  UtilityEval utility(double c) const { return utility_eval(specs.utility, c); }
};

/// Named built-in presets; see preset() for the list.
std::vector<std::string> preset_names();

/**
 * Returns a built-in preset by name.
 *
 *   section6           baseline calibration used throughout the numerical
 *                      studies (HealthOnly transmission, Product recovery)
 *   health_controls    strong health-capital channel; health expenditure
 *                      switches on below a positive discount threshold
 *   knowledge_controls strong learning channel; direct control investment
 *                      switches on below a positive discount threshold
 *   coupled_controls   both channels active; admits interior steady states
 *
 * Throws ConfigError for unknown names.
 */
Model preset(const std::string& name);

}  // namespace epigrow
