#include "epigrow/planner.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "epigrow/errors.hpp"
#include "epigrow/rootfind.hpp"

namespace epigrow {

namespace {

constexpr double kSignTol = 1e-12;
constexpr double kDenTol = 1e-14;
constexpr double kResidualTarget = 1e-12;
constexpr unsigned kSeedBase = 20260809;

double nan_value() { return std::numeric_limits<double>::quiet_NaN(); }

/// Endemic epidemic block at given (A, e, h) and birth rate.
struct EndemicRates {
  RateEval beta;
  RateEval gamma;
  double s, i, l;
};

std::optional<EndemicRates> endemic_rates(const Model& model, double A, double e, double h,
                                          double b) {
  const RateEval bv = model.beta(A, e, h);
  const RateEval gv = model.gamma(A, e, h);
  if ((1.0 - model.params.p) * bv.value <= b + gv.value) return std::nullopt;
  EndemicRates out{bv, gv, 0.0, 0.0, 0.0};
  out.s = (gv.value + b) / bv.value;
  out.i = (1.0 - model.params.p) * b / (gv.value + b) - b / bv.value;
  out.l = 1.0 - out.i;
  return out;
}

double rate_partial(const RateEval& r, int j) {
  switch (j) {
    case 1: return r.dA;
    case 2: return r.de;
    case 3: return r.dh;
  }
  throw std::invalid_argument("rate_partial: j must be 1, 2 or 3");
}

std::optional<double> l_theta_impl(const Model& model, int j, const EndemicRates& er,
                                   double theta, double b) {
  const double T = theta + b;
  const double den = (T + er.gamma.value) * (T + er.beta.value * er.i) -
                     er.beta.value * er.s * T;
  if (den <= kDenTol) return std::nullopt;
  const double bj = rate_partial(er.beta, j);
  const double gj = rate_partial(er.gamma, j);
  const double num = er.i * (gj * er.beta.value * er.i - (bj * er.s - gj) * T);
  return num / den;
}

/// Solves f1(k, l) = theta + delta_K + b - mu for k by bracketed Brent.
double solve_capital(const Model& model, double theta, double b, double l) {
  const double target = theta + model.params.delta_K + b - model.params.mu;
  if (target <= 0.0) {
    throw RegimeUnavailable("capital equation has no root: theta + delta_K + b - mu <= 0");
  }
  auto fn = [&](double k) { return model.production(k, l).f1 - target; };
  double hi = 1.0;
  while (fn(hi) > 0.0 && hi < 1e12) hi *= 2.0;
  return brent(fn, 1e-10, hi);
}

/// Health expenditure sustaining stock h: g(m) = (b + delta_H - mu) h.
double health_expenditure_for(const Model& model, double b, double h) {
  const double rhs = (b + model.params.delta_H - model.params.mu) * h;
  if (rhs <= 0.0) return 0.0;
  auto fn = [&](double m) { return model.health(m).value - rhs; };
  double hi = 1.0;
  while (fn(hi) < 0.0 && hi < 1e12) hi *= 2.0;
  return brent(fn, 0.0, hi);
}

/// Knowledge stock sustained by investment A: E(A, e) = delta_E e, e > 0
/// when such a branch exists, otherwise 0.
double knowledge_branch(const Model& model, double A) {
  if (A <= 0.0) return 0.0;
  const double dE = model.params.delta_E;
  auto fn = [&](double e) { return model.knowledge(A, e).value - dE * e; };
  const KnowledgeSpec& ks = model.specs.knowledge;
  if (ks.a4 > 0.0) {
    double hi = 1.0;
    while (fn(hi) > 0.0 && hi < 1e9) hi *= 2.0;
    return brent(fn, 1e-14, hi);
  }
  // essential form: positive branch exists only when the slope at 0 beats dE
  if (ks.a3 * (1.0 - std::exp(-ks.a1 * A)) * ks.a2 <= dE) return 0.0;
  double hi = 1.0;
  while (fn(hi) > 0.0 && hi < 1e9) hi *= 2.0;
  return brent(fn, 1e-12, hi);
}

struct MatrixEntries {
  double m11, m22, m23, m24, m31, m32, m33, m42, m43, m52, m53, m62, m63, m64;
  double b1, b2, b5;
};

MatrixEntries matrix_entries(const Model& model, const EndemicRates& er, double A, double e,
                             double m, double k, double c, double theta, double b) {
  const auto& prm = model.params;
  const KnowledgeEval E = model.knowledge(A, e);
  const double f2 = model.production(k, er.l).f2;
  const double up = model.utility(c).dc;
  const double si = er.s * er.i;
  MatrixEntries me{};
  me.m11 = model.health(m).dm;
  me.m22 = -er.beta.dA * si;
  me.m23 = er.beta.dA * si - er.gamma.dA * er.i;
  me.m24 = E.dA;
  me.m31 = theta + b + prm.delta_H - prm.mu;
  me.m32 = er.beta.dh * si;
  me.m33 = -(er.beta.dh * si - er.gamma.dh * er.i);
  me.m42 = theta + b + er.beta.value * er.i;
  me.m43 = -er.beta.value * er.i;
  me.m52 = er.beta.value * er.s;
  me.m53 = theta + b + er.gamma.value - er.beta.value * er.s;
  me.m62 = er.beta.de * si;
  me.m63 = -(er.beta.de * si - er.gamma.de * er.i);
  me.m64 = theta + prm.delta_E - E.de;
  me.b1 = up;
  me.b2 = up;
  me.b5 = -up * f2;
  return me;
}

CostateSolve solve_costates(const Model& model, const EndemicRates& er, double A, double e,
                            double m, double k, double c, double theta, double b) {
  const MatrixEntries me = matrix_entries(model, er, A, e, m, k, c, theta, b);
  Eigen::Matrix<double, 6, 6> M = Eigen::Matrix<double, 6, 6>::Zero();
  M(0, 0) = me.m11; M(0, 4) = 1.0;
  M(1, 1) = me.m22; M(1, 2) = me.m23; M(1, 3) = me.m24; M(1, 5) = 1.0;
  M(2, 0) = me.m31; M(2, 1) = me.m32; M(2, 2) = me.m33;
  M(3, 1) = me.m42; M(3, 2) = me.m43;
  M(4, 1) = me.m52; M(4, 2) = me.m53;
  M(5, 1) = me.m62; M(5, 2) = me.m63; M(5, 3) = me.m64;
  Eigen::Matrix<double, 6, 1> rhs;
  rhs << me.b1, me.b2, 0.0, 0.0, me.b5, 0.0;

  const double det_numeric = M.determinant();
  const double minor = me.m42 * me.m53 - me.m43 * me.m52;
  const double det_closed = me.m31 * me.m64 * minor;
  if (std::abs(det_numeric) < kDenTol) {
    throw SingularSystem("costates_and_multipliers: 6x6 system is singular");
  }
  const Eigen::Matrix<double, 6, 1> sol = M.partialPivLu().solve(rhs);

  CostateSolve out;
  out.costates = {model.utility(c).dc, sol(0), sol(1), sol(2), sol(3)};
  out.multipliers = {0.0, sol(4), sol(5), 0.0};
  out.det_residual = std::abs(det_numeric - det_closed) / std::max(1e-300, std::abs(det_closed));

  // independent closed forms through the labor sensitivities
  const double up = model.utility(c).dc;
  const double f2 = model.production(k, er.l).f2;
  const KnowledgeEval E = model.knowledge(A, e);
  const auto l1 = l_theta_impl(model, 1, er, theta, b);
  const auto l2 = l_theta_impl(model, 2, er, theta, b);
  const auto l3 = l_theta_impl(model, 3, er, theta, b);
  double gap = 0.0;
  if (l3) {
    const double nu2_closed = up - up * (*l3) / me.m31 * f2 * me.m11;
    gap = std::max(gap, std::abs(sol(4) - nu2_closed) / std::max(1.0, std::abs(nu2_closed)));
  }
  if (l1 && l2 && std::abs(me.m64) > kDenTol) {
    const double nu3_closed = up - up * (*l1) * f2 - up * (*l2) * f2 * E.dA / me.m64;
    gap = std::max(gap, std::abs(sol(5) - nu3_closed) / std::max(1.0, std::abs(nu3_closed)));
  }
  out.closed_form_gap = gap;
  return out;
}

bool kkt_flags_ok(const Candidate& c) {
  const auto& nu = c.multipliers;
  if (nu.nu1 < -kSignTol || nu.nu2 < -kSignTol || nu.nu3 < -kSignTol || nu.nu4 < -kSignTol) {
    return false;
  }
  const double slack =
      std::max({std::abs(c.state.i * nu.nu1), std::abs(c.controls.m * nu.nu2),
                std::abs(c.controls.A * nu.nu3), std::abs(c.state.s * nu.nu4)});
  return slack <= 1e-10;
}

Model with_overrides(const Model& model, double b, double theta) {
  Model m = model;
  m.params.b = b;
  m.params.theta = theta;
  return m;
}

SteadyStateSolution finish_endemic(const Model& model, Regime regime, double b, double theta,
                                   const EndemicRates& er, double A, double e, double m,
                                   double h, double k, double residual_hint) {
  const Model local = with_overrides(model, b, theta);
  const double f = local.production(k, er.l).value;
  const double c = f - m - A - (local.params.delta_K + b - local.params.mu) * k;
  if (c <= 0.0) throw RegimeUnavailable(to_string(regime) + ": consumption is non-positive");

  const CostateSolve cs = solve_costates(local, er, A, e, m, k, c, theta, b);
  SteadyStateSolution sol;
  sol.regime = regime;
  sol.state = {k, h, er.s, er.i, e};
  sol.controls = {c, m, A};
  sol.costates = cs.costates;
  sol.multipliers = cs.multipliers;
  sol.costate_gap = cs.closed_form_gap;
  sol.det_residual = cs.det_residual;
  sol.b = b;
  sol.theta = theta;
  sol.epi_stable = true;  // endemic state is stable whenever it exists

  Candidate cand{sol.state, sol.controls, sol.costates, sol.multipliers};
  const FocResiduals res = foc_residuals(local, cand);
  sol.residual_norm = std::max(res.max_norm(), residual_hint);
  sol.kkt_ok = kkt_flags_ok(cand) && res.multiplier_signs_ok;
  return sol;
}

}  // namespace

std::string to_string(Regime r) {
  switch (r) {
    case Regime::DiseaseFree: return "disease_free";
    case Regime::EndemicNoInvest: return "endemic_no_invest";
    case Regime::EndemicAOnly: return "endemic_A_only";
    case Regime::EndemicMOnly: return "endemic_m_only";
    case Regime::EndemicBoth: return "endemic_both";
  }
  return "?";
}

Regime regime_from_string(const std::string& s) {
  if (s == "disease_free") return Regime::DiseaseFree;
  if (s == "endemic_no_invest") return Regime::EndemicNoInvest;
  if (s == "endemic_A_only") return Regime::EndemicAOnly;
  if (s == "endemic_m_only") return Regime::EndemicMOnly;
  if (s == "endemic_both") return Regime::EndemicBoth;
  throw ConfigError("unknown regime: " + s);
}

double FocResiduals::max_norm() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

const char* FocResiduals::name(int index) {
  static constexpr const char* names[kCount] = {
      "stationarity_c", "stationarity_m", "stationarity_A",
      "costate_k",      "costate_h",      "costate_s",
      "costate_i",      "costate_e",      "state_k",
      "state_h",        "state_s",        "state_i",
      "state_e",        "slack_i",        "slack_m",
      "slack_A",        "slack_s",
  };
  return names[index];
}

FocResiduals foc_residuals(const Model& model, const Candidate& cand) {
  const auto& prm = model.params;
  const auto& st = cand.state;
  const auto& u = cand.controls;
  const auto& lam = cand.costates;
  const auto& nu = cand.multipliers;

  const RateEval beta = model.beta(u.A, st.e, st.h);
  const RateEval gamma = model.gamma(u.A, st.e, st.h);
  const KnowledgeEval E = model.knowledge(u.A, st.e);
  const ProductionEval f = model.production(st.k, st.labor());
  const HealthEval g = model.health(u.m);
  const double up = model.utility(u.c).dc;
  const double si = st.s * st.i;

  FocResiduals out;
  auto& r = out.values;
  r[0] = up - lam.lambda1;
  r[1] = -lam.lambda1 + lam.lambda2 * g.dm + nu.nu2;
  r[2] = -lam.lambda1 - lam.lambda3 * beta.dA * si +
         lam.lambda4 * (beta.dA * si - gamma.dA * st.i) + lam.lambda5 * E.dA + nu.nu3;
  r[3] = lam.lambda1 * (prm.theta + prm.delta_K + prm.b - prm.mu - f.f1);
  r[4] = lam.lambda2 * (prm.theta + prm.b + prm.delta_H - prm.mu) + lam.lambda3 * beta.dh * si -
         lam.lambda4 * (beta.dh * si - gamma.dh * st.i);
  r[5] = lam.lambda3 * (prm.theta + prm.b + beta.value * st.i) - lam.lambda4 * beta.value * st.i -
         nu.nu4;
  r[6] = lam.lambda1 * f.f2 + lam.lambda3 * beta.value * st.s +
         lam.lambda4 * (prm.theta + prm.b + gamma.value - beta.value * st.s) - nu.nu1;
  r[7] = lam.lambda3 * beta.de * si - lam.lambda4 * (beta.de * si - gamma.de * st.i) +
         lam.lambda5 * (prm.theta + prm.delta_E - E.de);
  const auto dy = coupled_rhs(st, u, model);
  for (int k = 0; k < 5; ++k) r[8 + k] = dy[k];
  r[13] = st.i * nu.nu1;
  r[14] = u.m * nu.nu2;
  r[15] = u.A * nu.nu3;
  r[16] = st.s * nu.nu4;
  out.multiplier_signs_ok = nu.nu1 >= -kSignTol && nu.nu2 >= -kSignTol &&
                            nu.nu3 >= -kSignTol && nu.nu4 >= -kSignTol;
  return out;
}

double l_theta_at(const Model& model, int j, double A, double e, double h, double theta,
                  double b) {
  const auto er = endemic_rates(model, A, e, h, b);
  if (!er) throw NoEndemicState("l_theta: no endemic state at (A, e, h)");
  const auto v = l_theta_impl(model, j, *er, theta, b);
  if (!v) throw SingularSystem("l_theta: denominator not positive");
  return *v;
}

double l_theta(const Model& model, int j, double A, double e, double h) {
  return l_theta_at(model, j, A, e, h, model.params.theta, model.params.b);
}

double labor_floor(const Model& model, double b, bool alternate_display) {
  const double bar_beta = model.specs.beta.bar_beta();
  const double floor_gamma = model.specs.gamma.floor_value();
  const double denom = alternate_display ? floor_gamma : floor_gamma + b;
  return 1.0 - ((1.0 - model.params.p) * b / denom - b / bar_beta);
}

CostateSolve costates_and_multipliers(const Model& model, const PlannerState& state,
                                      const Controls& controls) {
  const auto er = endemic_rates(model, controls.A, state.e, state.h, model.params.b);
  if (!er) throw NoEndemicState("costates_and_multipliers: no endemic state");
  EndemicRates at = *er;
  at.s = state.s;  // use the supplied steady-state fractions
  at.i = state.i;
  at.l = state.labor();
  return solve_costates(model, at, controls.A, state.e, controls.m, state.k, controls.c,
                        model.params.theta, model.params.b);
}

SteadyStateSolution solve_disease_free_ss(const Model& model) {
  const auto& prm = model.params;
  const double k = solve_capital(model, prm.theta, prm.b, 1.0);
  const ProductionEval f = model.production(k, 1.0);
  const double c = f.value - (prm.delta_K + prm.b - prm.mu) * k;
  if (c <= 0.0) throw SolverError("disease-free steady state has non-positive consumption", c);
  const double up = model.utility(c).dc;

  const double beta0 = model.beta(0.0, 0.0, 0.0).value;
  const double gamma0 = model.gamma(0.0, 0.0, 0.0).value;

  SteadyStateSolution sol;
  sol.regime = Regime::DiseaseFree;
  sol.state = {k, 0.0, 1.0 - prm.p, 0.0, 0.0};
  sol.controls = {c, 0.0, 0.0};
  sol.b = prm.b;
  sol.theta = prm.theta;

  // lambda2 = lambda3 = lambda5 = 0, so nu2 and nu3 both reduce to u'(c).
  // lambda4 comes from the infection co-state equation with nu1 = 0; when
  // its denominator vanishes, push the burden onto nu1 instead.
  const double den = prm.theta + prm.b + gamma0 - beta0 * (1.0 - prm.p);
  CoStates lam{up, 0.0, 0.0, 0.0, 0.0};
  Multipliers nu{0.0, up, up, 0.0};
  if (std::abs(den) > kDenTol) {
    lam.lambda4 = -up * f.f2 / den;
  } else {
    lam.lambda4 = 0.0;
    nu.nu1 = up * f.f2;
  }
  sol.costates = lam;
  sol.multipliers = nu;

  Candidate cand{sol.state, sol.controls, sol.costates, sol.multipliers};
  const FocResiduals res = foc_residuals(model, cand);
  sol.residual_norm = res.max_norm();
  sol.kkt_ok = kkt_flags_ok(cand) && res.multiplier_signs_ok;
  sol.epi_stable = (1.0 - prm.p) * beta0 < gamma0 + prm.b;
  sol.unique = true;
  return sol;
}

ThetaThresholds theta_thresholds(const Model& model, double b) {
  const auto& prm = model.params;
  const double bar_beta = model.specs.beta.bar_beta();
  const double floor_gamma = model.specs.gamma.floor_value();
  if (b < prm.mu || (1.0 - prm.p) * bar_beta - floor_gamma <= b) {
    throw NoEndemicState("theta_thresholds: b outside the endemic window");
  }
  const auto er = endemic_rates(model, 0.0, 0.0, 0.0, b);
  const double gp0 = model.health(0.0).dm;
  const double e1_bar = model.specs.knowledge.e1_origin();
  const double e2_bar = model.specs.knowledge.e2_origin();

  auto f2_floor = [&](double theta) -> std::optional<double> {
    const double c1 = theta + prm.delta_K + b - prm.mu;
    if (c1 <= 0.0) return std::nullopt;
    const double k = er->l * std::pow(model.specs.production.psi / c1,
                                      1.0 / (1.0 - model.specs.production.psi));
    return model.production(k, er->l).f2;
  };

  auto resid1 = [&](double theta) -> std::optional<double> {
    const auto f2 = f2_floor(theta);
    const auto l3 = l_theta_impl(model, 3, *er, theta, b);
    if (!f2 || !l3) return std::nullopt;
    return (theta + b + prm.delta_H - prm.mu) - (*l3) * (*f2) * gp0;
  };
  auto resid2 = [&](double theta) -> std::optional<double> {
    if (e1_bar > 0.0 && theta <= e2_bar - prm.delta_E) return std::nullopt;
    const auto f2 = f2_floor(theta);
    const auto l1 = l_theta_impl(model, 1, *er, theta, b);
    const auto l2 = l_theta_impl(model, 2, *er, theta, b);
    if (!f2 || !l1 || !l2) return std::nullopt;
    return (theta + prm.delta_E - e2_bar) * (1.0 - (*l1) * (*f2)) - (*l2) * (*f2) * e1_bar;
  };

  const double lo = prm.mu - prm.delta_K - b + 1e-4;
  const double hi = 1.0;
  constexpr int kScanPoints = 10000;

  ThetaThresholds out;
  out.theta1_roots = scan_roots(resid1, lo, hi, kScanPoints).roots;
  out.theta2_roots = scan_roots(resid2, lo, hi, kScanPoints).roots;
  out.theta1_found = !out.theta1_roots.empty();
  out.theta2_found = !out.theta2_roots.empty();
  out.theta1 = out.theta1_found ? out.theta1_roots.back() : nan_value();
  out.theta2 = out.theta2_found ? out.theta2_roots.back() : nan_value();

  out.theta_max = 0.0;
  if (out.theta1_found) out.theta_max = std::max(out.theta_max, out.theta1);
  if (out.theta2_found) out.theta_max = std::max(out.theta_max, out.theta2);
  if (out.theta1_found && out.theta2_found) {
    out.theta_min = std::min(out.theta1, out.theta2);
  } else if (out.theta1_found) {
    out.theta_min = out.theta1;
  } else if (out.theta2_found) {
    out.theta_min = out.theta2;
  } else {
    out.theta_min = nan_value();
  }
  return out;
}

SteadyStateSolution endemic_no_invest_candidate(const Model& model, double b, double theta) {
  const auto er = endemic_rates(model, 0.0, 0.0, 0.0, b);
  if (!er) throw RegimeUnavailable("endemic_no_invest: no endemic state at zero investment");
  const double k = solve_capital(model, theta, b, er->l);
  SteadyStateSolution sol =
      finish_endemic(model, Regime::EndemicNoInvest, b, theta, *er, 0.0, 0.0, 0.0, 0.0, k, 0.0);
  sol.unique = true;
  return sol;
}

SteadyStateSolution solve_endemic_no_invest(const Model& model, double b, double theta) {
  SteadyStateSolution sol = endemic_no_invest_candidate(model, b, theta);
  if (sol.multipliers.nu2 < -kSignTol || sol.multipliers.nu3 < -kSignTol) {
    std::ostringstream msg;
    msg << "endemic_no_invest: multiplier sign violated (nu2=" << sol.multipliers.nu2
        << ", nu3=" << sol.multipliers.nu3 << "); a spending regime is active";
    throw RegimeUnavailable(msg.str());
  }
  return sol;
}

namespace {

struct RegimeSolve {
  std::vector<double> x;
  double residual;
};

/// Runs damped Newton from each seed, returns converged solutions sorted
/// by residual then seed order.
std::vector<RegimeSolve> multistart(
    const std::function<std::optional<std::vector<double>>(const std::vector<double>&)>& F,
    const std::vector<std::vector<double>>& seeds, const std::vector<double>& lower) {
  NewtonOptions opts;
  opts.tol = kResidualTarget;
  opts.lower = lower;
  std::vector<RegimeSolve> found;
  for (const auto& s : seeds) {
    const NewtonResult r = damped_newton(F, s, opts);
    if (r.converged) found.push_back({r.x, r.residual});
  }
  std::stable_sort(found.begin(), found.end(),
                   [](const auto& a, const auto& b) { return a.residual < b.residual; });
  return found;
}

std::vector<RegimeSolve> dedupe(const std::vector<RegimeSolve>& sols, double rel_tol = 1e-6) {
  std::vector<RegimeSolve> out;
  for (const auto& s : sols) {
    bool dup = false;
    for (const auto& kept : out) {
      double d = 0.0;
      for (std::size_t k = 0; k < s.x.size(); ++k) {
        d = std::max(d, std::abs(s.x[k] - kept.x[k]) / std::max(1.0, std::abs(kept.x[k])));
      }
      if (d < rel_tol) {
        dup = true;
        break;
      }
    }
    if (!dup) out.push_back(s);
  }
  return out;
}

double best_residual(
    const std::function<std::optional<std::vector<double>>(const std::vector<double>&)>& F,
    const std::vector<std::vector<double>>& seeds) {
  double best = std::numeric_limits<double>::infinity();
  NewtonOptions opts;
  opts.tol = kResidualTarget;
  for (const auto& s : seeds) {
    const NewtonResult r = damped_newton(F, s, opts);
    best = std::min(best, r.residual);
  }
  return best;
}

}  // namespace

SteadyStateSolution solve_endemic_m_only(const Model& model, double b, double theta) {
  const auto& prm = model.params;
  const auto er0 = endemic_rates(model, 0.0, 0.0, 0.0, b);
  if (!er0) throw RegimeUnavailable("endemic_m_only: no endemic state at zero investment");

  auto F = [&](const std::vector<double>& x) -> std::optional<std::vector<double>> {
    const double m = x[0], h = x[1], k = x[2];
    if (m < 0.0 || h < 0.0 || k <= 0.0) return std::nullopt;
    const auto er = endemic_rates(model, 0.0, 0.0, h, b);
    if (!er) return std::nullopt;
    const auto l3 = l_theta_impl(model, 3, *er, theta, b);
    if (!l3) return std::nullopt;
    const ProductionEval f = model.production(k, er->l);
    return std::vector<double>{
        model.health(m).value - (b + prm.delta_H - prm.mu) * h,
        f.f1 - (theta + prm.delta_K + b - prm.mu),
        (theta + b + prm.delta_H - prm.mu) - (*l3) * f.f2 * model.health(m).dm,
    };
  };

  // scalar reduction in h provides the main seed
  auto r3_of_h = [&](double h) -> std::optional<double> {
    const auto er = endemic_rates(model, 0.0, 0.0, h, b);
    if (!er) return std::nullopt;
    const auto l3 = l_theta_impl(model, 3, *er, theta, b);
    if (!l3) return std::nullopt;
    const double m = health_expenditure_for(model, b, h);
    double k;
    try {
      k = solve_capital(model, theta, b, er->l);
    } catch (const RegimeUnavailable&) {
      return std::nullopt;
    }
    return (theta + b + prm.delta_H - prm.mu) - (*l3) * model.production(k, er->l).f2 *
                                                    model.health(m).dm;
  };

  std::vector<std::vector<double>> seeds;
  for (double root : scan_roots(r3_of_h, 1e-6, 50.0, 2000).roots) {
    const double m = health_expenditure_for(model, b, root);
    const auto er = endemic_rates(model, 0.0, 0.0, root, b);
    if (er) seeds.push_back({m, root, solve_capital(model, theta, b, er->l)});
  }
  const double k0 = solve_capital(model, theta, b, er0->l);
  for (const auto& pt : latin_hypercube({1e-4, 1e-4, 0.2 * k0}, {5.0, 20.0, 5.0 * k0}, 10,
                                        kSeedBase + 1)) {
    seeds.push_back(pt);
  }

  const auto sols = dedupe(multistart(F, seeds, {0.0, 0.0, 1e-10}));
  std::vector<SteadyStateSolution> accepted;
  for (const auto& s : sols) {
    const double m = s.x[0], h = s.x[1], k = s.x[2];
    if (m <= 1e-10 || h <= 1e-10) continue;
    const auto er = endemic_rates(model, 0.0, 0.0, h, b);
    if (!er) continue;
    SteadyStateSolution sol =
        finish_endemic(model, Regime::EndemicMOnly, b, theta, *er, 0.0, 0.0, m, h, k, s.residual);
    if (sol.multipliers.nu3 < -kSignTol) {
      throw RegimeUnavailable("endemic_m_only: investment multiplier sign violated");
    }
    accepted.push_back(sol);
  }
  if (accepted.empty()) {
    const double best = best_residual(F, seeds);
    if (best < 1e-4) {
      throw SolverError("endemic_m_only: Newton did not converge", best);
    }
    throw RegimeUnavailable("endemic_m_only: no positive-expenditure steady state found");
  }
  accepted.front().unique = accepted.size() == 1;
  return accepted.front();
}

SteadyStateSolution solve_endemic_A_only(const Model& model, double b, double theta) {
  const auto& prm = model.params;
  const auto er0 = endemic_rates(model, 0.0, 0.0, 0.0, b);
  if (!er0) throw RegimeUnavailable("endemic_A_only: no endemic state at zero investment");

  const ThetaThresholds th = theta_thresholds(model, b);
  const bool window_open = th.theta2_found && th.theta2 > 0.0 &&
                           th.theta_max == th.theta2 &&
                           theta > std::max(0.0, th.theta1_found ? th.theta1 : 0.0) &&
                           theta < th.theta2;
  if (!window_open) {
    throw RegimeUnavailable("endemic_A_only: (b, theta) outside the investment window");
  }

  auto F = [&](const std::vector<double>& x) -> std::optional<std::vector<double>> {
    const double A = x[0], e = x[1], k = x[2];
    if (A < 0.0 || e < 0.0 || k <= 0.0) return std::nullopt;
    const auto er = endemic_rates(model, A, e, 0.0, b);
    if (!er) return std::nullopt;
    const auto l1 = l_theta_impl(model, 1, *er, theta, b);
    const auto l2 = l_theta_impl(model, 2, *er, theta, b);
    if (!l1 || !l2) return std::nullopt;
    const KnowledgeEval E = model.knowledge(A, e);
    const ProductionEval f = model.production(k, er->l);
    return std::vector<double>{
        E.value - prm.delta_E * e,
        f.f1 - (theta + prm.delta_K + b - prm.mu),
        (theta + prm.delta_E - E.de) * (1.0 - (*l1) * f.f2) - (*l2) * f.f2 * E.dA,
    };
  };

  auto stationarity_of_A = [&](double A) -> std::optional<double> {
    const double e = knowledge_branch(model, A);
    if (e <= 0.0) return std::nullopt;
    const auto er = endemic_rates(model, A, e, 0.0, b);
    if (!er) return std::nullopt;
    const auto l1 = l_theta_impl(model, 1, *er, theta, b);
    const auto l2 = l_theta_impl(model, 2, *er, theta, b);
    if (!l1 || !l2) return std::nullopt;
    double k;
    try {
      k = solve_capital(model, theta, b, er->l);
    } catch (const RegimeUnavailable&) {
      return std::nullopt;
    }
    const KnowledgeEval E = model.knowledge(A, e);
    const double f2 = model.production(k, er->l).f2;
    return (theta + prm.delta_E - E.de) * (1.0 - (*l1) * f2) - (*l2) * f2 * E.dA;
  };

  std::vector<std::vector<double>> seeds;
  for (double root : scan_roots(stationarity_of_A, 1e-5, 30.0, 2000).roots) {
    const double e = knowledge_branch(model, root);
    const auto er = endemic_rates(model, root, e, 0.0, b);
    if (er) seeds.push_back({root, e, solve_capital(model, theta, b, er->l)});
  }
  const double k0 = solve_capital(model, theta, b, er0->l);
  for (const auto& pt : latin_hypercube({1e-4, 1e-4, 0.2 * k0}, {5.0, 10.0, 5.0 * k0}, 10,
                                        kSeedBase + 2)) {
    seeds.push_back(pt);
  }

  const auto sols = dedupe(multistart(F, seeds, {0.0, 0.0, 1e-10}));
  std::vector<SteadyStateSolution> accepted;
  for (const auto& s : sols) {
    const double A = s.x[0], e = s.x[1], k = s.x[2];
    if (A <= 1e-10 || e <= 1e-10) continue;
    const auto er = endemic_rates(model, A, e, 0.0, b);
    if (!er) continue;
    SteadyStateSolution sol =
        finish_endemic(model, Regime::EndemicAOnly, b, theta, *er, A, e, 0.0, 0.0, k, s.residual);
    if (sol.multipliers.nu2 < -kSignTol) {
      throw RegimeUnavailable("endemic_A_only: health multiplier sign violated");
    }
    accepted.push_back(sol);
  }
  if (accepted.empty()) {
    const double best = best_residual(F, seeds);
    if (best < 1e-4) {
      throw SolverError("endemic_A_only: Newton did not converge", best);
    }
    throw RegimeUnavailable("endemic_A_only: no positive-investment steady state found");
  }
  accepted.front().unique = accepted.size() == 1;
  return accepted.front();
}

std::vector<SteadyStateSolution> solve_endemic_both(const Model& model, double b, double theta) {
  const auto& prm = model.params;
  const auto er0 = endemic_rates(model, 0.0, 0.0, 0.0, b);
  if (!er0) throw RegimeUnavailable("endemic_both: no endemic state at zero investment");

  auto F = [&](const std::vector<double>& x) -> std::optional<std::vector<double>> {
    const double m = x[0], h = x[1], A = x[2], e = x[3], k = x[4];
    if (m < 0.0 || h < 0.0 || A < 0.0 || e < 0.0 || k <= 0.0) return std::nullopt;
    const auto er = endemic_rates(model, A, e, h, b);
    if (!er) return std::nullopt;
    const auto l1 = l_theta_impl(model, 1, *er, theta, b);
    const auto l2 = l_theta_impl(model, 2, *er, theta, b);
    const auto l3 = l_theta_impl(model, 3, *er, theta, b);
    if (!l1 || !l2 || !l3) return std::nullopt;
    const KnowledgeEval E = model.knowledge(A, e);
    const ProductionEval f = model.production(k, er->l);
    return std::vector<double>{
        model.health(m).value - (b + prm.delta_H - prm.mu) * h,
        E.value - prm.delta_E * e,
        f.f1 - (theta + prm.delta_K + b - prm.mu),
        (theta + b + prm.delta_H - prm.mu) - (*l3) * f.f2 * model.health(m).dm,
        (theta + prm.delta_E - E.de) * (1.0 - (*l1) * f.f2) - (*l2) * f.f2 * E.dA,
    };
  };

  // nested scalar reduction: for each h solve the investment equation in A,
  // then look for a sign change of the health equation in h
  auto inner_A = [&](double h) -> std::optional<double> {
    auto r5 = [&](double A) -> std::optional<double> {
      const double e = knowledge_branch(model, A);
      if (e <= 0.0) return std::nullopt;
      const auto er = endemic_rates(model, A, e, h, b);
      if (!er) return std::nullopt;
      const auto l1 = l_theta_impl(model, 1, *er, theta, b);
      const auto l2 = l_theta_impl(model, 2, *er, theta, b);
      if (!l1 || !l2) return std::nullopt;
      double k;
      try {
        k = solve_capital(model, theta, b, er->l);
      } catch (const RegimeUnavailable&) {
        return std::nullopt;
      }
      const KnowledgeEval E = model.knowledge(A, e);
      const double f2 = model.production(k, er->l).f2;
      return (theta + prm.delta_E - E.de) * (1.0 - (*l1) * f2) - (*l2) * f2 * E.dA;
    };
    const auto roots = scan_roots(r5, 1e-5, 30.0, 400).roots;
    if (roots.empty()) return std::nullopt;
    return roots.front();
  };
  auto r4_of_h = [&](double h) -> std::optional<double> {
    const auto A = inner_A(h);
    if (!A) return std::nullopt;
    const double e = knowledge_branch(model, *A);
    const double m = health_expenditure_for(model, b, h);
    const auto er = endemic_rates(model, *A, e, h, b);
    if (!er) return std::nullopt;
    const auto l3 = l_theta_impl(model, 3, *er, theta, b);
    if (!l3) return std::nullopt;
    double k;
    try {
      k = solve_capital(model, theta, b, er->l);
    } catch (const RegimeUnavailable&) {
      return std::nullopt;
    }
    return (theta + b + prm.delta_H - prm.mu) - (*l3) * model.production(k, er->l).f2 *
                                                    model.health(m).dm;
  };

  std::vector<std::vector<double>> seeds;
  for (double h : scan_roots(r4_of_h, 1e-4, 20.0, 120).roots) {
    const auto A = inner_A(h);
    if (!A) continue;
    const double e = knowledge_branch(model, *A);
    const double m = health_expenditure_for(model, b, h);
    const auto er = endemic_rates(model, *A, e, h, b);
    if (er) seeds.push_back({m, h, *A, e, solve_capital(model, theta, b, er->l)});
  }
  const double k0 = solve_capital(model, theta, b, er0->l);
  for (const auto& pt : latin_hypercube({1e-4, 1e-4, 1e-4, 1e-4, 0.2 * k0},
                                        {2.0, 10.0, 2.0, 5.0, 5.0 * k0}, 10, kSeedBase + 3)) {
    seeds.push_back(pt);
  }

  const auto sols = dedupe(multistart(F, seeds, {0.0, 0.0, 0.0, 0.0, 1e-10}));
  std::vector<SteadyStateSolution> accepted;
  for (const auto& s : sols) {
    const double m = s.x[0], h = s.x[1], A = s.x[2], e = s.x[3], k = s.x[4];
    if (m <= 1e-8 || A <= 1e-8 || h <= 1e-10 || e <= 1e-10) continue;
    const auto er = endemic_rates(model, A, e, h, b);
    if (!er) continue;
    try {
      SteadyStateSolution sol =
          finish_endemic(model, Regime::EndemicBoth, b, theta, *er, A, e, m, h, k, s.residual);
      if (sol.kkt_ok) accepted.push_back(sol);
    } catch (const RegimeUnavailable&) {
      continue;
    }
  }
  if (accepted.empty()) {
    throw RegimeUnavailable("endemic_both: no interior steady state found");
  }
  for (auto& sol : accepted) sol.unique = accepted.size() == 1;
  return accepted;
}

Classification classify_steady_state(const Model& model, double b, double theta) {
  Classification out;
  const Model local = with_overrides(model, b, theta);
  const double bar_beta = model.specs.beta.bar_beta();
  const double floor_gamma = model.specs.gamma.floor_value();
  out.endemic_window = (1.0 - model.params.p) * bar_beta > b + floor_gamma;

  auto consider = [&](SteadyStateSolution sol) {
    if (sol.kkt_ok && sol.epi_stable) {
      out.solutions.push_back(std::move(sol));
    } else {
      out.rejected.push_back({sol.regime, sol.kkt_ok ? "epidemic block unstable at this point"
                                                     : "multiplier signs violated"});
    }
  };

  try {
    consider(solve_disease_free_ss(local));
  } catch (const std::exception& e) {
    out.rejected.push_back({Regime::DiseaseFree, e.what()});
  }

  if (out.endemic_window) {
    try {
      out.thresholds = theta_thresholds(local, b);
    } catch (const std::exception&) {
      out.thresholds.reset();
    }
    auto attempt = [&](Regime regime, auto&& solver) {
      try {
        consider(solver());
      } catch (const std::exception& e) {
        out.rejected.push_back({regime, e.what()});
      }
    };
    attempt(Regime::EndemicNoInvest, [&] { return solve_endemic_no_invest(local, b, theta); });
    attempt(Regime::EndemicMOnly, [&] { return solve_endemic_m_only(local, b, theta); });
    attempt(Regime::EndemicAOnly, [&] { return solve_endemic_A_only(local, b, theta); });
    try {
      for (auto& sol : solve_endemic_both(local, b, theta)) consider(std::move(sol));
    } catch (const std::exception& e) {
      out.rejected.push_back({Regime::EndemicBoth, e.what()});
    }
  }

  if (!out.endemic_window) {
    out.predicted = Regime::DiseaseFree;
  } else if (out.thresholds) {
    const auto& th = *out.thresholds;
    const bool m_on = th.theta1_found && theta < th.theta1;
    const bool a_on = th.theta2_found && theta < th.theta2;
    out.predicted = m_on ? (a_on ? Regime::EndemicBoth : Regime::EndemicMOnly)
                         : (a_on ? Regime::EndemicAOnly : Regime::EndemicNoInvest);
  } else {
    out.predicted = Regime::EndemicNoInvest;
  }
  return out;
}

MonotonicityReport comparative_statics_check(const Model& model,
                                             const std::vector<double>& A_grid,
                                             const std::vector<double>& e_grid,
                                             const std::vector<double>& h_grid) {
  const auto& prm = model.params;
  const double target_f1 = prm.theta + prm.delta_K + prm.b - prm.mu;
  const std::size_t nA = A_grid.size(), ne = e_grid.size(), nh = h_grid.size();

  struct Cell {
    double l, k, f1, f2;
  };
  std::vector<Cell> cells(nA * ne * nh);
  auto at = [&](std::size_t a, std::size_t b_, std::size_t c) -> Cell& {
    return cells[(a * ne + b_) * nh + c];
  };

  MonotonicityReport rep;
  auto fail = [&](const std::string& claim, const std::string& witness) {
    rep.claims.push_back({claim, false, witness});
    rep.all_pass = false;
  };

  for (std::size_t a = 0; a < nA; ++a) {
    for (std::size_t b_ = 0; b_ < ne; ++b_) {
      for (std::size_t c = 0; c < nh; ++c) {
        const auto er = endemic_rates(model, A_grid[a], e_grid[b_], h_grid[c], prm.b);
        if (!er) {
          throw NoEndemicState("comparative_statics_check: grid point not endemic");
        }
        const double k = solve_capital(model, prm.theta, prm.b, er->l);
        const ProductionEval f = model.production(k, er->l);
        at(a, b_, c) = {er->l, k, f.f1, f.f2};
      }
    }
  }

  auto witness = [&](std::size_t a, std::size_t b_, std::size_t c) {
    std::ostringstream os;
    os << "(A=" << A_grid[a] << ", e=" << e_grid[b_] << ", h=" << h_grid[c] << ")";
    return os.str();
  };

  // g'(m*(h)) nonincreasing in h
  {
    bool ok = true;
    std::string w;
    for (std::size_t c = 0; c + 1 < nh && ok; ++c) {
      const double gp0 = model.health(health_expenditure_for(model, prm.b, h_grid[c])).dm;
      const double gp1 = model.health(health_expenditure_for(model, prm.b, h_grid[c + 1])).dm;
      if (gp1 > gp0 + kSignTol) {
        ok = false;
        w = witness(0, 0, c + 1);
      }
    }
    if (ok) rep.claims.push_back({"health_marginal_product_decreasing_in_h", true, ""});
    else fail("health_marginal_product_decreasing_in_h", w);
  }

  auto check_monotone = [&](const std::string& claim, auto getter, bool nondecreasing) {
    for (std::size_t a = 0; a < nA; ++a) {
      for (std::size_t b_ = 0; b_ < ne; ++b_) {
        for (std::size_t c = 0; c < nh; ++c) {
          const double cur = getter(at(a, b_, c));
          auto bad = [&](double next) {
            return nondecreasing ? next < cur - kSignTol : next > cur + kSignTol;
          };
          if ((a + 1 < nA && bad(getter(at(a + 1, b_, c)))) ||
              (b_ + 1 < ne && bad(getter(at(a, b_ + 1, c)))) ||
              (c + 1 < nh && bad(getter(at(a, b_, c + 1))))) {
            fail(claim, witness(a, b_, c));
            return;
          }
        }
      }
    }
    rep.claims.push_back({claim, true, ""});
  };
  check_monotone("labor_nondecreasing", [](const Cell& c) { return c.l; }, true);
  check_monotone("capital_nondecreasing", [](const Cell& c) { return c.k; }, true);
  check_monotone("labor_marginal_product_nonincreasing", [](const Cell& c) { return c.f2; },
                 false);

  {
    bool ok = true;
    std::string w;
    for (std::size_t a = 0; a < nA && ok; ++a) {
      for (std::size_t b_ = 0; b_ < ne && ok; ++b_) {
        for (std::size_t c = 0; c < nh && ok; ++c) {
          if (std::abs(at(a, b_, c).f1 - target_f1) > 1e-10) {
            ok = false;
            w = witness(a, b_, c);
          }
        }
      }
    }
    if (ok) rep.claims.push_back({"capital_marginal_product_constant", true, ""});
    else fail("capital_marginal_product_constant", w);
  }
  return rep;
}

}  // namespace epigrow
