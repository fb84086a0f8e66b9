#include "epigrow/validate.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include "epigrow/errors.hpp"
#include "epigrow/planner.hpp"

namespace epigrow {

namespace {

std::string point3(double A, double e, double h) {
  std::ostringstream os;
  os << "(A=" << A << ", e=" << e << ", h=" << h << ")";
  return os.str();
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> g(n);
  for (int k = 0; k < n; ++k) g[k] = lo + (hi - lo) * k / (n - 1);
  return g;
}

}  // namespace

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::SampledPass: return "sampled-pass";
    case CheckStatus::Note: return "note";
    case CheckStatus::Fail: return "FAIL";
  }
  return "?";
}

bool ValidationReport::ok() const {
  for (const auto& it : items) {
    if (it.status == CheckStatus::Fail) return false;
  }
  return true;
}

bool ValidationReport::has(const std::string& name, CheckStatus status) const {
  for (const auto& it : items) {
    if (it.name == name && it.status == status) return true;
  }
  return false;
}

std::string ValidationReport::text() const {
  std::ostringstream os;
  for (const auto& it : items) {
    os << to_string(it.status) << "  " << it.name;
    if (!it.detail.empty()) os << "  -- " << it.detail;
    os << "\n";
  }
  os << (ok() ? "result: no hard violations\n" : "result: HARD VIOLATIONS PRESENT\n");
  return os.str();
}

ValidationReport validate_assumptions(const Model& model) {
  ValidationReport rep;
  auto add = [&](std::string name, CheckStatus st, std::string detail = "") {
    rep.items.push_back({std::move(name), st, std::move(detail)});
  };
  const auto& prm = model.params;
  const auto& sp = model.specs;

  // demographic ordering and basic ranges
  if (prm.b >= prm.mu) {
    add("birth_rate_at_least_death_rate", CheckStatus::Pass);
  } else {
    std::ostringstream os;
    os << "b=" << prm.b << " < mu=" << prm.mu;
    add("birth_rate_at_least_death_rate", CheckStatus::Fail, os.str());
  }
  try {
    prm.validate();
    add("parameter_ranges", CheckStatus::Pass);
  } catch (const std::exception& e) {
    add("parameter_ranges", CheckStatus::Fail, e.what());
  }
  try {
    sp.beta.validate();
    sp.gamma.validate();
    sp.knowledge.validate();
    sp.production.validate();
    sp.utility.validate();
    add("spec_invariants", CheckStatus::Pass);
  } catch (const std::exception& e) {
    add("spec_invariants", CheckStatus::Fail, e.what());
    return rep;  // evaluators below may be meaningless
  }

  const auto grid = linspace(0.0, 1.0, 13);

  // transmission rate: bounds, monotonicity, curvature
  {
    bool bounds = true, mono = true, convex = true;
    std::string wb, wm, wc;
    const double bar = sp.beta.bar_beta();
    for (double A : grid) {
      for (double e : grid) {
        for (double h : grid) {
          const RateEval r = beta_eval(sp.beta, A, e, h);
          if (!(r.value > 0.0 && r.value <= bar + 1e-15 && r.value <= 1.0 + 1e-15) && bounds) {
            bounds = false;
            wb = point3(A, e, h);
          }
          if ((r.dA > 1e-12 || r.de > 1e-12 || r.dh > 1e-12) && mono) {
            mono = false;
            wm = point3(A, e, h);
          }
        }
      }
    }
    const double d = 1e-4;
    for (double t : linspace(0.05, 0.95, 7)) {
      auto second = [&](int axis) {
        auto at = [&](double off) {
          const double A = t + (axis == 0 ? off : 0.0);
          const double e = t + (axis == 1 ? off : 0.0);
          const double h = t + (axis == 2 ? off : 0.0);
          return beta_eval(sp.beta, A, e, h).value;
        };
        return (at(d) - 2.0 * at(0.0) + at(-d)) / (d * d);
      };
      for (int axis = 0; axis < 3 && convex; ++axis) {
        if (second(axis) < -1e-6) {
          convex = false;
          wc = point3(t, t, t);
        }
      }
    }
    add("transmission_bounds", bounds ? CheckStatus::SampledPass : CheckStatus::Fail, wb);
    add("transmission_monotone_nonincreasing", mono ? CheckStatus::SampledPass : CheckStatus::Fail,
        wm);
    add("transmission_convex_per_coordinate",
        convex ? CheckStatus::SampledPass : CheckStatus::Fail, wc);
    if (std::abs(bar - 1.0) > 1e-12) {
      std::ostringstream os;
      os << "beta(0,0,0)=" << bar << " differs from the normalized value 1";
      add("transmission_normalized_at_origin", CheckStatus::Note, os.str());
    } else {
      add("transmission_normalized_at_origin", CheckStatus::Pass);
    }
  }

  // recovery rate: bounds, monotonicity, curvature
  {
    bool bounds = true, mono = true;
    std::string wb, wm;
    for (double A : grid) {
      for (double e : grid) {
        for (double h : grid) {
          const RateEval r = gamma_eval(sp.gamma, A, e, h);
          if (!(r.value >= 0.0 && r.value <= 1.0 + 1e-15) && bounds) {
            bounds = false;
            wb = point3(A, e, h);
          }
          if ((r.dA < -1e-12 || r.de < -1e-12 || r.dh < -1e-12) && mono) {
            mono = false;
            wm = point3(A, e, h);
          }
        }
      }
    }
    add("recovery_bounds", bounds ? CheckStatus::SampledPass : CheckStatus::Fail, wb);
    add("recovery_monotone_nondecreasing", mono ? CheckStatus::SampledPass : CheckStatus::Fail,
        wm);
    if (sp.gamma.gamma1 > 1.0) {
      std::ostringstream os;
      os << "gamma approaches gamma1=" << sp.gamma.gamma1 << " > 1 for large inputs";
      add("recovery_ceiling_within_unit", CheckStatus::Note, os.str());
    } else {
      add("recovery_ceiling_within_unit", CheckStatus::Pass);
    }
    if (sp.gamma.floor_value() > 0.0) {
      add("recovery_floor_positive", CheckStatus::Pass);
    } else {
      add("recovery_floor_positive", CheckStatus::Fail, "gamma1 - gamma0 <= 0");
    }
  }

  // physical production
  {
    bool grad = true;
    std::string wg;
    for (double k : linspace(0.1, 10.0, 8)) {
      for (double l : linspace(0.1, 1.0, 8)) {
        const ProductionEval f = production_eval(sp.production, k, l);
        if ((f.f1 <= 0.0 || f.f2 <= 0.0) && grad) {
          grad = false;
          std::ostringstream os;
          os << "(k=" << k << ", l=" << l << ")";
          wg = os.str();
        }
      }
    }
    add("production_gradient_positive", grad ? CheckStatus::SampledPass : CheckStatus::Fail, wg);
    add("production_hessian_definite", CheckStatus::Note,
        "constant-returns form: Hessian is negative semidefinite (determinant 0), not definite");
    const bool inada = production_eval(sp.production, 1e-12, 1.0).f1 > 1e6 &&
                       production_eval(sp.production, 1e12, 1.0).f1 < 1e-6;
    add("production_capital_limits", inada ? CheckStatus::Pass : CheckStatus::Fail);
  }

  // health production
  {
    const double gp0 = health_eval(sp.production, 0.0).dm;
    const bool ok = std::abs(health_eval(sp.production, 0.0).value) < 1e-15 &&
                    std::isfinite(gp0) && gp0 > 0.0 &&
                    health_second_derivative(sp.production, 0.5) < 0.0;
    add("health_curvature_and_origin", ok ? CheckStatus::Pass : CheckStatus::Fail,
        ok ? "" : "needs g(0)=0, finite g'(0)>0, g''<0");
  }

  // utility
  {
    const bool ok = utility_eval(sp.utility, 1e-12).dc > 1e6 &&
                    utility_eval(sp.utility, 1.0).dc > utility_eval(sp.utility, 2.0).dc;
    add("utility_curvature", ok ? CheckStatus::Pass : CheckStatus::Fail);
  }

  // knowledge production
  {
    bool essential = true;
    std::string we;
    for (double t : linspace(0.1, 5.0, 10)) {
      if (std::abs(knowledge_eval(sp.knowledge, t, 0.0).value) > 1e-15) {
        essential = false;
        std::ostringstream os;
        os << "E(" << t << ", 0) = " << knowledge_eval(sp.knowledge, t, 0.0).value;
        we = os.str();
        break;
      }
      if (std::abs(knowledge_eval(sp.knowledge, 0.0, t).value) > 1e-15) {
        essential = false;
        we = "E(0, e) != 0";
        break;
      }
    }
    if (essential) {
      add("knowledge_essential_inputs", CheckStatus::Pass);
    } else {
      add("knowledge_essential_inputs",
          sp.knowledge.a4 > 0.0 ? CheckStatus::Note : CheckStatus::Fail,
          sp.knowledge.a4 > 0.0 ? "investment-only channel active: " + we : we);
    }

    bool positive = true, own_concave = true;
    std::string wp, wo;
    const double d = 1e-4;
    for (double A : linspace(0.05, 1.0, 20)) {
      for (double e : linspace(0.05, 1.0, 20)) {
        const KnowledgeEval E = knowledge_eval(sp.knowledge, A, e);
        if ((E.dA <= 0.0 || E.de <= 0.0) && positive) {
          positive = false;
          wp = point3(A, e, 0);
        }
        const double eAA = (knowledge_eval(sp.knowledge, A + d, e).value -
                            2.0 * E.value + knowledge_eval(sp.knowledge, A - d, e).value) /
                           (d * d);
        const double eee = (knowledge_eval(sp.knowledge, A, e + d).value -
                            2.0 * E.value + knowledge_eval(sp.knowledge, A, e - d).value) /
                           (d * d);
        if ((eAA > 1e-6 || eee > 1e-6) && own_concave) {
          own_concave = false;
          wo = point3(A, e, 0);
        }
      }
    }
    add("knowledge_partials_positive", positive ? CheckStatus::SampledPass : CheckStatus::Fail,
        wp);
    add("knowledge_own_concavity", own_concave ? CheckStatus::SampledPass : CheckStatus::Fail,
        wo);

    // joint concavity determinant; forms with essential inputs lose it
    // near the origin, so a violation is reported rather than failed
    bool joint = true;
    std::string wj;
    for (double A : linspace(0.05, 1.0, 20)) {
      for (double e : linspace(0.05, 1.0, 20)) {
        const double eAA = (knowledge_eval(sp.knowledge, A + d, e).dA -
                            knowledge_eval(sp.knowledge, A - d, e).dA) / (2.0 * d);
        const double eee = (knowledge_eval(sp.knowledge, A, e + d).de -
                            knowledge_eval(sp.knowledge, A, e - d).de) / (2.0 * d);
        const double eAe = (knowledge_eval(sp.knowledge, A, e + d).dA -
                            knowledge_eval(sp.knowledge, A, e - d).dA) / (2.0 * d);
        if (eAA * eee - eAe * eAe <= 0.0) {
          joint = false;
          wj = point3(A, e, 0);
          break;
        }
      }
      if (!joint) break;
    }
    add("knowledge_joint_concavity", joint ? CheckStatus::SampledPass : CheckStatus::Note,
        joint ? "" : "determinant non-positive at " + wj);

    const bool saturates = knowledge_eval(sp.knowledge, 1e8, 1.0).dA < 1e-6 &&
                           knowledge_eval(sp.knowledge, 1.0, 1e8).de < 1e-6;
    add("knowledge_saturation", saturates ? CheckStatus::Pass : CheckStatus::Fail);

    // detachment of the knowledge co-state: de must avoid theta + delta_E
    double closest = 1e300;
    std::string wd;
    for (double A : linspace(0.0, 5.0, 26)) {
      for (double e : linspace(0.0, 5.0, 26)) {
        const double gap = std::abs(knowledge_eval(sp.knowledge, A, e).de -
                                    (prm.theta + prm.delta_E));
        if (gap < closest) {
          closest = gap;
          wd = point3(A, e, 0);
        }
      }
    }
    if (closest > 1e-9) {
      add("knowledge_costate_detachment", CheckStatus::SampledPass);
    } else {
      add("knowledge_costate_detachment", CheckStatus::Fail,
          "de = theta + delta_E near " + wd);
    }
  }

  // labor-sensitivity monotonicity in (A, e, h); the regime theorems rely
  // on it, so violations are surfaced here
  {
    const double bar = sp.beta.bar_beta();
    const double fl = sp.gamma.floor_value();
    if ((1.0 - prm.p) * bar > prm.b + fl) {
      bool mono = true;
      std::string wm;
      const auto pts = linspace(0.0, 0.1, 5);
      const double step = 1e-5;
      for (int j = 1; j <= 3 && mono; ++j) {
        for (double A : pts) {
          for (double e : pts) {
            for (double h : pts) {
              try {
                const double v0 = l_theta(model, j, A, e, h);
                const double vA = l_theta(model, j, A + step, e, h);
                const double ve = l_theta(model, j, A, e + step, h);
                const double vh = l_theta(model, j, A, e, h + step);
                if (vA > v0 + 1e-12 || ve > v0 + 1e-12 || vh > v0 + 1e-12) {
                  mono = false;
                  std::ostringstream os;
                  os << "channel " << j << " at " << point3(A, e, h);
                  wm = os.str();
                }
              } catch (const NoEndemicState&) {
                // grid corner left the endemic region; skip
              }
              if (!mono) break;
            }
            if (!mono) break;
          }
          if (!mono) break;
        }
      }
      add("labor_sensitivity_monotone", mono ? CheckStatus::SampledPass : CheckStatus::Note,
          mono ? "" : "increases at " + wm);
    } else {
      add("labor_sensitivity_monotone", CheckStatus::Note,
          "not applicable: no endemic window at this b");
    }
  }

  add("calibration_extras_ignored", CheckStatus::Note,
      "recovery-curve constants beyond (gamma0, gamma1, eta2) and a fifth health coefficient "
      "have no role in any functional form and are not part of the configuration schema");

  return rep;
}

}  // namespace epigrow
