#pragma once

#include <string>
#include <vector>

#include "epigrow/model.hpp"

namespace epigrow {

enum class CheckStatus {
  Pass,         ///< holds analytically or exactly
  SampledPass,  ///< holds at every sampled point
  Note,         ///< known inconsistency of the baseline calibration, reported
  Fail,         ///< hard violation with witness
};

std::string to_string(CheckStatus s);

struct CheckItem {
  std::string name;
  CheckStatus status;
  std::string detail;  ///< witness point or explanation
};

struct ValidationReport {
  std::vector<CheckItem> items;

  bool ok() const;  ///< true when nothing has status Fail
  bool has(const std::string& name, CheckStatus status) const;
  std::string text() const;
};

/**
 * Checks the model's structural requirements: demographic ordering,
 * rate-function bounds and monotonicity (sampled on [0,1]^3), production
 * and utility curvature, knowledge-production shape, the knowledge
 * detachment condition de != theta + delta_E (sampled), and, when an
 * endemic window exists, the sampled monotonicity of the labor
 * sensitivities in (A, e, h).
 *
 * Known quirks of the baseline calibration (transmission rate not
 * normalized to 1 at the origin, unused recovery-curve extras, the
 * Cobb-Douglas Hessian being only semidefinite, the loss of joint
 * knowledge concavity near the origin) are reported as Note rather
 * than Fail.
 */
ValidationReport validate_assumptions(const Model& model);

}  // namespace epigrow
