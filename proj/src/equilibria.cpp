#include "epigrow/equilibria.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

#include "epigrow/errors.hpp"

namespace epigrow {

namespace {

constexpr double kBoundaryTol = 1e-12;

Eigen::Matrix4d to_eigen(const std::array<std::array<double, 4>, 4>& m) {
  Eigen::Matrix4d out;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) out(r, c) = m[r][c];
  }
  return out;
}

std::array<std::complex<double>, 4> sorted_eigenvalues(const Eigen::Matrix4d& j) {
  Eigen::EigenSolver<Eigen::Matrix4d> solver(j, /*computeEigenvectors=*/false);
  std::array<std::complex<double>, 4> ev;
  for (int k = 0; k < 4; ++k) ev[k] = solver.eigenvalues()(k);
  std::sort(ev.begin(), ev.end(), [](const auto& a, const auto& b) {
    return a.real() != b.real() ? a.real() > b.real() : a.imag() > b.imag();
  });
  return ev;
}

}  // namespace

ReproductionNumbers reproduction_numbers(double beta, double gamma, double b, double p) {
  const double r0 = beta / (b + gamma);
  return {r0, (1.0 - p) * r0, std::max(0.0, 1.0 - 1.0 / r0)};
}

EpiState disease_free_eq(double p) { return {1.0 - p, 0.0, 0.0, p}; }

EpiState endemic_eq(double beta, double gamma, double b, double p) {
  if ((1.0 - p) * beta <= b + gamma) {
    throw NoEndemicState("endemic_eq: requires (1-p)*beta > b + gamma");
  }
  EpiState y;
  y.s = (gamma + b) / beta;
  y.i = (1.0 - p) * b / (gamma + b) - b / beta;
  y.v = p;
  y.r = 1.0 - y.s - y.i - y.v;
  return y;
}

std::array<std::array<double, 4>, 4> epi_jacobian(const EpiState& at, double beta, double gamma,
                                                  double b, double /*p*/) {
  return {{
      {-b - beta * at.i, -beta * at.s, 0.0, 0.0},
      {beta * at.i, beta * at.s - gamma - b, 0.0, 0.0},
      {0.0, gamma, -b, 0.0},
      {0.0, 0.0, 0.0, -b},
  }};
}

EquilibriumReport df_stability(double beta, double gamma, double b, double p) {
  EquilibriumReport rep;
  rep.kind = EquilibriumKind::DiseaseFree;
  rep.point = disease_free_eq(p);
  const auto rn = reproduction_numbers(beta, gamma, b, p);
  rep.r0 = rn.r0;
  rep.r_vac = rn.r_vac;

  const Eigen::Matrix4d j = to_eigen(epi_jacobian(rep.point, beta, gamma, b, p));
  rep.eigenvalues = sorted_eigenvalues(j);

  const double lead = beta * (1.0 - p) - b - gamma;
  rep.boundary = std::abs(lead) <= kBoundaryTol;
  rep.stable = !rep.boundary && lead < 0.0;

  // closed-form spectrum {lead, -b, -b, -b}
  std::array<double, 4> closed{lead, -b, -b, -b};
  std::sort(closed.begin(), closed.end(), std::greater<>());
  double gap = 0.0;
  for (int k = 0; k < 4; ++k) {
    gap = std::max(gap, std::abs(rep.eigenvalues[k] - std::complex<double>(closed[k], 0.0)));
  }
  rep.closed_form_gap = gap;
  rep.closed_form_agrees = gap <= 1e-10 * std::max(1.0, std::abs(lead));

  const double det_closed = -b * b * b * lead;
  rep.det_check = std::abs(j.determinant() - det_closed) / std::max(1e-300, std::abs(det_closed));
  return rep;
}

EquilibriumReport endemic_stability(double beta, double gamma, double b, double p) {
  EquilibriumReport rep;
  rep.kind = EquilibriumKind::Endemic;
  rep.point = endemic_eq(beta, gamma, b, p);
  const auto rn = reproduction_numbers(beta, gamma, b, p);
  rep.r0 = rn.r0;
  rep.r_vac = rn.r_vac;

  const Eigen::Matrix4d j = to_eigen(epi_jacobian(rep.point, beta, gamma, b, p));
  rep.eigenvalues = sorted_eigenvalues(j);
  rep.boundary = std::abs((1.0 - p) * beta - (b + gamma)) <= kBoundaryTol;
  rep.stable = !rep.boundary && std::all_of(rep.eigenvalues.begin(), rep.eigenvalues.end(),
                                            [](const auto& z) { return z.real() < 0.0; });

  const double det_closed = b * b * b * ((1.0 - p) * beta - (b + gamma));
  rep.det_check = std::abs(j.determinant() - det_closed) / std::max(1e-300, std::abs(det_closed));

  // Closed-form nontrivial pair: (-(1-p)*beta*b +- x) / (2(b+gamma)) with
  // x^2 expanded in powers of the raw parameters.
  const double x2 = b * b * beta * beta * p * p + 4 * std::pow(b, 4) - 4 * std::pow(b, 3) * beta +
                    b * b * beta * beta + 4 * b * std::pow(gamma, 3) +
                    4 * (3 * b * b - b * beta) * gamma * gamma +
                    4 * (3 * std::pow(b, 3) - 2 * b * b * beta) * gamma +
                    2 * (2 * std::pow(b, 3) * beta - b * b * beta * beta +
                         4 * b * b * beta * gamma + 2 * b * beta * gamma * gamma) * p;
  const std::complex<double> x = std::sqrt(std::complex<double>(x2, 0.0));
  const std::complex<double> tr(-(1.0 - p) * beta * b, 0.0);
  const std::complex<double> lam_plus = (tr + x) / (2.0 * (b + gamma));
  const std::complex<double> lam_minus = (tr - x) / (2.0 * (b + gamma));

  // match against the two numeric eigenvalues that are not -b
  std::vector<std::complex<double>> nontrivial;
  for (const auto& z : rep.eigenvalues) {
    if (std::abs(z - std::complex<double>(-b, 0.0)) > 1e-9 * std::max(1.0, b)) {
      nontrivial.push_back(z);
    }
  }
  double gap = 0.0;
  if (nontrivial.size() == 2) {
    const double d1 = std::abs(nontrivial[0] - lam_plus) + std::abs(nontrivial[1] - lam_minus);
    const double d2 = std::abs(nontrivial[0] - lam_minus) + std::abs(nontrivial[1] - lam_plus);
    gap = std::min(d1, d2);
  } else {
    // eigenvalues collided with -b; compare the closed pair against the
    // closest numeric values instead
    for (const auto& target : {lam_plus, lam_minus}) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& z : rep.eigenvalues) best = std::min(best, std::abs(z - target));
      gap = std::max(gap, best);
    }
  }
  rep.closed_form_gap = gap;
  rep.closed_form_agrees = gap <= 1e-8 * std::max(1.0, beta);
  return rep;
}

std::vector<BifurcationRow> bifurcation_scan(SweepParameter which, std::span<const double> grid,
                                             double beta, double gamma, double b, double p) {
  std::vector<BifurcationRow> rows;
  rows.reserve(grid.size());
  for (double g : grid) {
    const double bv = which == SweepParameter::Beta ? g : beta;
    const double pv = which == SweepParameter::VaccinatedShare ? g : p;
    BifurcationRow row;
    row.sweep_value = g;
    row.r_vac = reproduction_numbers(bv, gamma, b, pv).r_vac;
    row.i_df = 0.0;
    const auto df = df_stability(bv, gamma, b, pv);
    row.df_stable = df.stable;
    if ((1.0 - pv) * bv > b + gamma) {
      const auto en = endemic_stability(bv, gamma, b, pv);
      row.endemic_exists = true;
      row.i_endemic = en.point.i;
      row.endemic_stable = en.stable;
    } else {
      row.endemic_exists = false;
      row.i_endemic = std::numeric_limits<double>::quiet_NaN();
      row.endemic_stable = false;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace epigrow
