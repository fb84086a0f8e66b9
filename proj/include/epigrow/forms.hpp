#pragma once

#include <string>

namespace epigrow {

/// Value of a rate function together with its partials in (A, e, h).
struct RateEval {
  double value;
  double dA;
  double de;
  double dh;
};

enum class TransmissionForm { KnowledgeOnly, HealthOnly, Product };

/**
 * Disease transmission rate beta(A, e, h).
 *
 * Forms:
 *   KnowledgeOnly:  beta0 * exp(-eta * e)
 *   HealthOnly:     beta1 + beta0 * exp(-eta * h)
 *   Product:        beta0 * exp(-eta * A * e * h)
 *
 * All forms are positive, bounded by bar_beta() = beta(0,0,0), and
 * non-increasing in each argument.
 */
struct TransmissionSpec {
  TransmissionForm form = TransmissionForm::KnowledgeOnly;
  double beta0 = 0.023;
  double beta1 = 0.0;
  double eta = 1.0;

  double bar_beta() const;
  void validate() const;
};

RateEval beta_eval(const TransmissionSpec& spec, double A, double e, double h);

enum class RecoveryForm { Product, HealthOnly };

/**
 * Recovery rate gamma(A, e, h).
 *
 * Forms:
 *   Product:     gamma1 - gamma0 * exp(-eta2 * A * e * h)
 *   HealthOnly:  gamma1 - gamma0 * exp(-eta2 * h)
 *
 * Values lie in [floor_value(), gamma1) with floor_value() = gamma1 - gamma0
 * attained at the origin; partials are non-negative.
 */
struct RecoverySpec {
  RecoveryForm form = RecoveryForm::Product;
  double gamma0 = 1.0;
  double gamma1 = 1.01;
  double eta2 = 1.0;

  double floor_value() const { return gamma1 - gamma0; }
  void validate() const;
};

RateEval gamma_eval(const RecoverySpec& spec, double A, double e, double h);

/// Value of the knowledge production function with partials in (A, e).
struct KnowledgeEval {
  double value;
  double dA;
  double de;
};

/**
 * Knowledge production E(A, e) for disease control.
 *
 * Base form: a3 * (1 - exp(-a1*A)) * (1 - exp(-a2*e)), which makes both
 * inputs essential (E(A,0) = E(0,e) = 0) and keeps the partials bounded
 * near the origin.
 *
 * The optional channel a4 * (1 - exp(-a5*A)) (enabled when a4 > 0) lets
 * investment produce knowledge without prior experience; it gives the
 * origin limit of dA the positive value a4*a5, which is what opens a
 * positive direct-investment window in the steady-state analysis.
 */
struct KnowledgeSpec {
  double a1 = 0.023;
  double a2 = 0.023;
  double a3 = 1.0;
  double a4 = 0.0;
  double a5 = 0.0;

  /// Limit of dA as (A, e) -> (0, 0).
  double e1_origin() const { return a4 > 0.0 ? a4 * a5 : 0.0; }
  /// Limit of de as (A, e) -> (0, 0).
  double e2_origin() const { return 0.0; }
  void validate() const;
};

KnowledgeEval knowledge_eval(const KnowledgeSpec& spec, double A, double e);

/**
 * Physical production f(k, l) = k^psi l^(1-psi) and health production
 * g(m) = psi3 (m + psi1)^psi2 - psi4 psi1^psi2. psi3 = psi4 keeps g(0) = 0.
 */
struct ProductionSpec {
  double psi = 0.3;
  double psi1 = 0.2;
  double psi2 = 0.5;
  double psi3 = 0.5;
  double psi4 = 0.5;

  void validate() const;
};

/// f value with gradient and Hessian entries.
struct ProductionEval {
  double value;
  double f1;   ///< d/dk
  double f2;   ///< d/dl
  double f11;
  double f12;
  double f22;
};

ProductionEval production_eval(const ProductionSpec& spec, double k, double l);

struct HealthEval {
  double value;
  double dm;
};

HealthEval health_eval(const ProductionSpec& spec, double m);
double health_second_derivative(const ProductionSpec& spec, double m);

enum class UtilityForm { Log, CRRA };

/// Instantaneous utility u(c); Log by default, CRRA with sigma != 1 optional.
struct UtilitySpec {
  UtilityForm form = UtilityForm::Log;
  double sigma = 2.0;

  void validate() const;
};

struct UtilityEval {
  double value;
  double dc;
};

UtilityEval utility_eval(const UtilitySpec& spec, double c);

std::string to_string(TransmissionForm f);
std::string to_string(RecoveryForm f);
std::string to_string(UtilityForm f);
TransmissionForm transmission_form_from_string(const std::string& s);
RecoveryForm recovery_form_from_string(const std::string& s);
UtilityForm utility_form_from_string(const std::string& s);

}  // namespace epigrow
