#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "epigrow/equilibria.hpp"
#include "epigrow/errors.hpp"
#include "oracles.hpp"

using namespace epigrow;
using testing::uniform;

namespace {

struct Draw {
  double beta, gamma, b, p;
};

/// Random parameters with a strictly supercritical vaccination-adjusted
/// reproduction number.
Draw random_endemic_draw(double min_margin = 1e-3) {
  const double b = uniform(0.01, 0.3);
  const double gamma = uniform(0.0, 1.0);
  const double p = uniform(0.0, 0.9);
  const double beta = (b + gamma) / (1.0 - p) * (1.0 + min_margin + uniform(0.0, 2.0));
  return {beta, gamma, b, p};
}

}  // namespace

TEST_CASE("reproduction numbers") {
  CHECK(reproduction_numbers(0.5, 0.4, 0.1, 0.0).r0 == doctest::Approx(1.0));
  const auto rn = reproduction_numbers(0.5, 0.1, 0.1, 0.0);
  CHECK(rn.r0 == doctest::Approx(2.5));
  CHECK(rn.p_crit == doctest::Approx(0.6));
  CHECK(reproduction_numbers(0.1, 0.3, 0.1, 0.0).p_crit == 0.0);
  CHECK(reproduction_numbers(0.5, 0.1, 0.1, 0.25).r_vac == doctest::Approx(0.75 * 2.5));
}

TEST_CASE("disease-free equilibrium") {
  const EpiState half = disease_free_eq(0.5);
  CHECK(half.s == 0.5);
  CHECK(half.i == 0.0);
  CHECK(half.v == 0.5);
  CHECK(half.r == 0.0);
  const EpiState none = disease_free_eq(0.0);
  CHECK(none.s == 1.0);
  CHECK(none.v == 0.0);

  const ModelParams prm{0.1, 0.05, 0.5, 0.05, 0.05, 0.05, 0.05};
  for (double d : epi_rhs(half, 0.7, 0.2, prm)) CHECK(d == 0.0);
}

TEST_CASE("endemic equilibrium closed form") {
  const EpiState plain = endemic_eq(1.0, 0.0, 0.1, 0.0);
  CHECK(plain.s == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(plain.i == doctest::Approx(0.9).epsilon(1e-14));
  CHECK(plain.v == 0.0);
  CHECK(plain.r == doctest::Approx(0.0).epsilon(1e-14));

  const EpiState en = endemic_eq(0.5, 0.1, 0.1, 0.2);
  CHECK(en.s == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(en.i == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(en.v == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(en.r == doctest::Approx(0.2).epsilon(1e-14));
  const ModelParams prm{0.1, 0.05, 0.2, 0.05, 0.05, 0.05, 0.05};
  for (double d : epi_rhs(en, 0.5, 0.1, prm)) CHECK(std::abs(d) <= 1e-15);

  // (1-p) R0 = 0.9 < 1: no endemic state
  CHECK_THROWS_AS(endemic_eq(0.2, 0.1, 0.1, 0.1), NoEndemicState);
}

TEST_CASE("disease-free stability report") {
  const auto rep = df_stability(0.5, 0.1, 0.1, 0.2);
  CHECK(rep.eigenvalues[0].real() == doctest::Approx(0.2).epsilon(1e-12));
  for (int k = 1; k < 4; ++k) {
    CHECK(rep.eigenvalues[k].real() == doctest::Approx(-0.1).epsilon(1e-12));
  }
  CHECK(!rep.stable);
  CHECK(!rep.boundary);
  CHECK(rep.closed_form_agrees);

  // marginal case: leading eigenvalue exactly zero
  const auto marginal = df_stability(0.2, 0.1, 0.1, 0.0);
  CHECK(marginal.boundary);
  CHECK(!marginal.stable);

  const auto stable = df_stability(0.1, 0.1, 0.1, 0.2);
  CHECK(stable.stable);
}

TEST_CASE("endemic stability report") {
  const auto rep = endemic_stability(0.5, 0.1, 0.1, 0.2);
  CHECK(rep.stable);
  for (const auto& ev : rep.eigenvalues) CHECK(ev.real() < 0.0);
  CHECK(rep.det_check <= 1e-10);
  CHECK(rep.closed_form_agrees);

  // two eigenvalues sit at exactly -b
  int at_minus_b = 0;
  for (const auto& ev : rep.eigenvalues) {
    if (std::abs(ev - std::complex<double>(-0.1, 0.0)) < 1e-10) ++at_minus_b;
  }
  CHECK(at_minus_b >= 2);

  CHECK_THROWS_AS(endemic_stability(0.1, 0.1, 0.1, 0.2), NoEndemicState);
}

TEST_CASE("random draws: equilibrium exactness and stability theorem") {
  const ModelParams base{0.1, 0.05, 0.0, 0.05, 0.05, 0.05, 0.05};
  for (int n = 0; n < 1000; ++n) {
    const Draw d = random_endemic_draw(1e-6);
    const EpiState en = endemic_eq(d.beta, d.gamma, d.b, d.p);
    ModelParams prm = base;
    prm.b = d.b;
    prm.p = d.p;
    const auto rhs = epi_rhs(en, d.beta, d.gamma, prm);
    for (double r : rhs) CHECK(std::abs(r) <= 1e-12);
    CHECK(std::abs(en.sum() - 1.0) <= 1e-14);
    CHECK(en.s >= 0.0);
    CHECK(en.i >= 0.0);
    CHECK(en.r >= -1e-15);
    CHECK(en.v >= 0.0);

    const auto endemic = endemic_stability(d.beta, d.gamma, d.b, d.p);
    CHECK(endemic.stable);  // supercritical: endemic state is stable
    CHECK(endemic.det_check <= 1e-10);

    const auto df = df_stability(d.beta, d.gamma, d.b, d.p);
    CHECK(!df.stable);  // and the disease-free point is not
    CHECK(df.closed_form_gap <= 1e-10 * std::max(1.0, d.beta));
  }
}

TEST_CASE("bifurcation scan across the critical transmission rate") {
  const double gamma = 0.1, b = 0.1, p = 0.2;
  const double beta_crit = (b + gamma) / (1.0 - p);
  std::vector<double> grid(500);
  for (int k = 0; k < 500; ++k) grid[k] = beta_crit * (0.2 + 2.8 * k / 499.0);

  const auto rows = bifurcation_scan(SweepParameter::Beta, grid, 0.0, gamma, b, p);
  REQUIRE(rows.size() == grid.size());

  int flips = 0;
  double prev_i = 0.0;
  bool seen_endemic = false;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& row = rows[k];
    if (row.r_vac < 1.0) {
      CHECK(row.df_stable);
      CHECK(!row.endemic_exists);
    } else if (row.r_vac > 1.0) {
      CHECK(!row.df_stable);
    }
    if (k > 0 && rows[k - 1].df_stable != row.df_stable) ++flips;
    if (row.endemic_exists) {
      CHECK(row.endemic_stable);
      if (!seen_endemic) {
        CHECK(row.i_endemic < 2e-3);  // branch emerges from zero
        seen_endemic = true;
      } else {
        CHECK(row.i_endemic > prev_i);  // and grows monotonically
      }
      prev_i = row.i_endemic;
    }
  }
  CHECK(flips == 1);
  CHECK(seen_endemic);
}

TEST_CASE("vaccination sweep moves the system out of the endemic region") {
  std::vector<double> grid(101);
  for (int k = 0; k <= 100; ++k) grid[k] = k / 100.0;
  const auto rows = bifurcation_scan(SweepParameter::VaccinatedShare, grid, 0.5, 0.1, 0.1, 0.0);
  CHECK(rows.front().endemic_exists);   // p = 0, r_vac = 2.5
  CHECK(!rows.back().endemic_exists);   // p = 1
  for (const auto& row : rows) {
    CHECK(row.df_stable == (row.r_vac < 1.0));
  }
}
