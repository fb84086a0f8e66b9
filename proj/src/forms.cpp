#include "epigrow/forms.hpp"

#include <cmath>
#include <stdexcept>

#include "epigrow/errors.hpp"

namespace epigrow {

namespace {

void require_nonnegative(double A, double e, double h, const char* who) {
  if (A < 0.0 || e < 0.0 || h < 0.0) {
    throw std::domain_error(std::string(who) + ": inputs must be non-negative");
  }
}

}  // namespace

double TransmissionSpec::bar_beta() const {
  return form == TransmissionForm::HealthOnly ? beta1 + beta0 : beta0;
}

void TransmissionSpec::validate() const {
  if (beta0 <= 0.0) throw std::invalid_argument("transmission: beta0 must be > 0");
  if (beta1 < 0.0) throw std::invalid_argument("transmission: beta1 must be >= 0");
  if (eta < 0.0) throw std::invalid_argument("transmission: eta must be >= 0");
}

RateEval beta_eval(const TransmissionSpec& spec, double A, double e, double h) {
  require_nonnegative(A, e, h, "beta_eval");
  switch (spec.form) {
    case TransmissionForm::KnowledgeOnly: {
      const double v = spec.beta0 * std::exp(-spec.eta * e);
      return {v, 0.0, -spec.eta * v, 0.0};
    }
    case TransmissionForm::HealthOnly: {
      const double ex = spec.beta0 * std::exp(-spec.eta * h);
      return {spec.beta1 + ex, 0.0, 0.0, -spec.eta * ex};
    }
    case TransmissionForm::Product: {
      const double v = spec.beta0 * std::exp(-spec.eta * A * e * h);
      return {v, -spec.eta * e * h * v, -spec.eta * A * h * v, -spec.eta * A * e * v};
    }
  }
  throw std::logic_error("beta_eval: unreachable");
}

void RecoverySpec::validate() const {
  if (gamma1 - gamma0 <= 0.0) {
    throw std::invalid_argument("recovery: gamma1 - gamma0 must be > 0");
  }
  if (gamma0 <= 0.0) throw std::invalid_argument("recovery: gamma0 must be > 0");
  if (eta2 < 0.0) throw std::invalid_argument("recovery: eta2 must be >= 0");
}

RateEval gamma_eval(const RecoverySpec& spec, double A, double e, double h) {
  require_nonnegative(A, e, h, "gamma_eval");
  switch (spec.form) {
    case RecoveryForm::Product: {
      const double ex = spec.gamma0 * std::exp(-spec.eta2 * A * e * h);
      return {spec.gamma1 - ex, spec.eta2 * e * h * ex, spec.eta2 * A * h * ex,
              spec.eta2 * A * e * ex};
    }
    case RecoveryForm::HealthOnly: {
      const double ex = spec.gamma0 * std::exp(-spec.eta2 * h);
      return {spec.gamma1 - ex, 0.0, 0.0, spec.eta2 * ex};
    }
  }
  throw std::logic_error("gamma_eval: unreachable");
}

void KnowledgeSpec::validate() const {
  if (a1 <= 0.0 || a2 <= 0.0 || a3 <= 0.0) {
    throw std::invalid_argument("knowledge: a1, a2, a3 must be > 0");
  }
  if (a4 < 0.0 || a5 < 0.0) {
    throw std::invalid_argument("knowledge: a4, a5 must be >= 0");
  }
  if (a4 > 0.0 && a5 <= 0.0) {
    throw std::invalid_argument("knowledge: a5 must be > 0 when a4 > 0");
  }
}

KnowledgeEval knowledge_eval(const KnowledgeSpec& spec, double A, double e) {
  if (A < 0.0 || e < 0.0) throw std::domain_error("knowledge_eval: inputs must be non-negative");
  const double expA = std::exp(-spec.a1 * A);
  const double expe = std::exp(-spec.a2 * e);
  const double pA = 1.0 - expA;
  const double pe = 1.0 - expe;
  double value = spec.a3 * pA * pe;
  double dA = spec.a3 * spec.a1 * expA * pe;
  const double de = spec.a3 * spec.a2 * pA * expe;
  if (spec.a4 > 0.0) {
    const double exp5 = std::exp(-spec.a5 * A);
    value += spec.a4 * (1.0 - exp5);
    dA += spec.a4 * spec.a5 * exp5;
  }
  return {value, dA, de};
}

void ProductionSpec::validate() const {
  if (psi <= 0.0 || psi >= 1.0) throw std::invalid_argument("production: psi must lie in (0,1)");
  if (psi2 <= 0.0 || psi2 >= 1.0) throw std::invalid_argument("production: psi2 must lie in (0,1)");
  if (psi1 < 0.0 || psi3 < 0.0) throw std::invalid_argument("production: psi1, psi3 must be >= 0");
  if (psi3 != psi4) throw std::invalid_argument("production: psi3 must equal psi4 so g(0) = 0");
}

ProductionEval production_eval(const ProductionSpec& spec, double k, double l) {
  if (k <= 0.0 || l <= 0.0) throw std::domain_error("production_eval: k and l must be > 0");
  const double psi = spec.psi;
  const double v = std::pow(k, psi) * std::pow(l, 1.0 - psi);
  const double f1 = psi * v / k;
  const double f2 = (1.0 - psi) * v / l;
  return {v, f1, f2, (psi - 1.0) * f1 / k, psi * f2 / k, -psi * f2 / l};
}

HealthEval health_eval(const ProductionSpec& spec, double m) {
  if (m < 0.0) throw std::domain_error("health_eval: m must be >= 0");
  const double base = std::pow(m + spec.psi1, spec.psi2);
  return {spec.psi3 * base - spec.psi4 * std::pow(spec.psi1, spec.psi2),
          spec.psi3 * spec.psi2 * base / (m + spec.psi1)};
}

double health_second_derivative(const ProductionSpec& spec, double m) {
  if (m < 0.0) throw std::domain_error("health_second_derivative: m must be >= 0");
  return spec.psi3 * spec.psi2 * (spec.psi2 - 1.0) * std::pow(m + spec.psi1, spec.psi2 - 2.0);
}

void UtilitySpec::validate() const {
  if (form == UtilityForm::CRRA && (sigma <= 0.0 || sigma == 1.0)) {
    throw std::invalid_argument("utility: CRRA sigma must be > 0 and != 1");
  }
}

UtilityEval utility_eval(const UtilitySpec& spec, double c) {
  if (c <= 0.0) throw std::domain_error("utility_eval: c must be > 0");
  if (spec.form == UtilityForm::Log) {
    return {std::log(c), 1.0 / c};
  }
  const double s = spec.sigma;
  return {(std::pow(c, 1.0 - s) - 1.0) / (1.0 - s), std::pow(c, -s)};
}

std::string to_string(TransmissionForm f) {
  switch (f) {
    case TransmissionForm::KnowledgeOnly: return "knowledge_only";
    case TransmissionForm::HealthOnly: return "health_only";
    case TransmissionForm::Product: return "product";
  }
  return "?";
}

std::string to_string(RecoveryForm f) {
  return f == RecoveryForm::Product ? "product" : "health_only";
}

std::string to_string(UtilityForm f) { return f == UtilityForm::Log ? "log" : "crra"; }

TransmissionForm transmission_form_from_string(const std::string& s) {
  if (s == "knowledge_only") return TransmissionForm::KnowledgeOnly;
  if (s == "health_only") return TransmissionForm::HealthOnly;
  if (s == "product") return TransmissionForm::Product;
  throw ConfigError("unknown transmission form: " + s);
}

RecoveryForm recovery_form_from_string(const std::string& s) {
  if (s == "product") return RecoveryForm::Product;
  if (s == "health_only") return RecoveryForm::HealthOnly;
  throw ConfigError("unknown recovery form: " + s);
}

UtilityForm utility_form_from_string(const std::string& s) {
  if (s == "log") return UtilityForm::Log;
  if (s == "crra") return UtilityForm::CRRA;
  throw ConfigError("unknown utility form: " + s);
}

}  // namespace epigrow
