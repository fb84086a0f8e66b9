#include "epigrow/model.hpp"

#include <stdexcept>

#include "epigrow/errors.hpp"

namespace epigrow {

void ModelParams::validate() const {
  if (b <= 0.0 || mu <= 0.0) throw std::invalid_argument("params: b and mu must be > 0");
  if (b < mu) throw std::invalid_argument("params: b must be >= mu");
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("params: p must lie in [0,1]");
  if (theta <= 0.0) throw std::invalid_argument("params: theta must be > 0");
  for (double d : {delta_K, delta_H, delta_E}) {
    if (d <= 0.0 || d >= 1.0) {
      throw std::invalid_argument("params: depreciation rates must lie in (0,1)");
    }
  }
}

void Model::validate() const {
  params.validate();
  specs.beta.validate();
  specs.gamma.validate();
  specs.knowledge.validate();
  specs.production.validate();
  specs.utility.validate();
}

std::vector<std::string> preset_names() {
  return {"section6", "health_controls", "knowledge_controls", "coupled_controls"};
}

Model preset(const std::string& name) {
  Model m;
  if (name == "section6") {
    m.params = {0.0482, 0.005, 0.5, 0.05, 0.05, 0.05, 0.05};
    m.specs.beta = {TransmissionForm::HealthOnly, 0.023, 0.023, 1.0};
    m.specs.gamma = {RecoveryForm::Product, 1.0, 1.01, 1.0};
    m.specs.knowledge = {0.023, 0.023, 1.0, 0.0, 0.0};
    m.specs.production = {0.3, 0.2, 0.5, 0.5, 0.5};
    m.specs.utility = {UtilityForm::Log, 2.0};
  } else if (name == "health_controls") {
    m.params = {0.05, 0.005, 0.2, 0.04, 0.05, 0.05, 0.05};
    m.specs.beta = {TransmissionForm::HealthOnly, 0.2, 0.05, 1.0};
    m.specs.gamma = {RecoveryForm::HealthOnly, 0.05, 0.06, 1.0};
    m.specs.knowledge = {0.023, 0.023, 1.0, 0.0, 0.0};
    m.specs.production = {0.3, 0.2, 0.5, 0.5, 0.5};
    m.specs.utility = {UtilityForm::Log, 2.0};
  } else if (name == "knowledge_controls") {
    m.params = {0.10, 0.005, 0.0, 0.05, 0.05, 0.02, 0.05};
    m.specs.beta = {TransmissionForm::KnowledgeOnly, 0.2, 0.0, 0.8};
    m.specs.gamma = {RecoveryForm::Product, 1.0, 1.01, 0.0};
    m.specs.knowledge = {1.0, 1.0, 0.02, 0.05, 20.0};
    m.specs.production = {0.3, 0.2, 0.5, 0.5, 0.5};
    m.specs.utility = {UtilityForm::Log, 2.0};
  } else if (name == "coupled_controls") {
    m.params = {0.015, 0.005, 0.0, 0.02, 0.05, 0.02, 0.05};
    m.specs.beta = {TransmissionForm::KnowledgeOnly, 0.2, 0.0, 0.8};
    m.specs.gamma = {RecoveryForm::HealthOnly, 0.015, 0.025, 1.0};
    m.specs.knowledge = {1.0, 1.0, 0.02, 0.05, 20.0};
    m.specs.production = {0.3, 0.2, 0.5, 0.5, 0.5};
    m.specs.utility = {UtilityForm::Log, 2.0};
  } else {
    throw ConfigError("unknown preset: " + name);
  }
  m.validate();
  return m;
}

}  // namespace epigrow
