#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "epigrow/dynamics.hpp"
#include "epigrow/model.hpp"

namespace epigrow {

struct ReproductionNumbers {
  double r0;      ///< beta / (b + gamma)
  double r_vac;   ///< (1 - p) * r0
  double p_crit;  ///< max(0, 1 - 1/r0), herd-immunity vaccination share
};

ReproductionNumbers reproduction_numbers(double beta, double gamma, double b, double p);

/// (s, i, v, r) = (1-p, 0, p, 0).
EpiState disease_free_eq(double p);

/// Endemic fixed point of the fraction system; requires (1-p)*beta > b + gamma,
/// otherwise throws NoEndemicState.
EpiState endemic_eq(double beta, double gamma, double b, double p);

/// Analytic Jacobian of the fraction system at a state, ordered (s, i, r, v).
std::array<std::array<double, 4>, 4> epi_jacobian(const EpiState& at, double beta, double gamma,
                                                  double b, double p);

enum class EquilibriumKind { DiseaseFree, Endemic };

struct EquilibriumReport {
  EquilibriumKind kind;
  EpiState point;
  double r0 = 0.0;
  double r_vac = 0.0;
  std::array<std::complex<double>, 4> eigenvalues{};
  bool stable = false;
  bool boundary = false;        ///< |(1-p)beta - (b+gamma)| below 1e-12
  double det_check = 0.0;       ///< relative gap, numeric det vs closed form
  double closed_form_gap = 0.0; ///< eigenvalue pair vs closed-form expression
  bool closed_form_agrees = true;
};

/// Disease-free equilibrium report; eigenvalues are computed numerically
/// from the assembled Jacobian and cross-checked against the closed form
/// {beta(1-p)-b-gamma, -b, -b, -b}.
EquilibriumReport df_stability(double beta, double gamma, double b, double p);

/// Endemic equilibrium report; the determinant is compared with
/// b^3((1-p)beta - (b+gamma)) and the nontrivial eigenvalue pair with its
/// closed form (reported, never thrown, when they disagree).
EquilibriumReport endemic_stability(double beta, double gamma, double b, double p);

struct BifurcationRow {
  double sweep_value;   ///< the swept parameter (beta or p)
  double r_vac;
  double i_df;          ///< always 0
  double i_endemic;     ///< NaN when no endemic state exists
  bool df_stable;
  bool endemic_exists;
  bool endemic_stable;  ///< false when absent
};

enum class SweepParameter { Beta, VaccinatedShare };

/// Evaluates both equilibrium branches along a monotone grid of beta or p.
std::vector<BifurcationRow> bifurcation_scan(SweepParameter which, std::span<const double> grid,
                                             double beta, double gamma, double b, double p);

}  // namespace epigrow
