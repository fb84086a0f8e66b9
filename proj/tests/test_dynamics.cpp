#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "epigrow/dynamics.hpp"
#include "epigrow/equilibria.hpp"
#include "epigrow/errors.hpp"
#include "epigrow/model.hpp"
#include "oracles.hpp"

using namespace epigrow;
using testing::uniform;

namespace {

/// Model whose rates are constants (learning switched off).
Model constant_rate_model(double beta, double gamma, double b, double mu, double p) {
  Model m = preset("section6");
  m.specs.beta = {TransmissionForm::KnowledgeOnly, beta, 0.0, 0.0};
  m.specs.gamma = {RecoveryForm::Product, 1.0, 1.0 + gamma, 0.0};
  m.params.b = b;
  m.params.mu = mu;
  m.params.p = p;
  return m;
}

}  // namespace

TEST_CASE("fraction right-hand side vanishes at both equilibria") {
  const ModelParams prm{0.1, 0.05, 0.2, 0.05, 0.05, 0.05, 0.05};
  const double beta = 0.5, gamma = 0.1;

  const EpiState df = disease_free_eq(prm.p);
  for (double d : epi_rhs(df, beta, gamma, prm)) CHECK(std::abs(d) < 1e-16);

  const EpiState en = endemic_eq(beta, gamma, prm.b, prm.p);
  for (double d : epi_rhs(en, beta, gamma, prm)) CHECK(std::abs(d) <= 1e-14);

  // no infections without infected individuals
  ModelParams nop = prm;
  nop.p = 0.0;
  const auto d = epi_rhs({1.0, 0.0, 0.0, 0.0}, beta, gamma, nop);
  CHECK(d[0] == 0.0);
  CHECK(d[1] == 0.0);
}

TEST_CASE("fraction right-hand side sums to zero on the simplex") {
  const ModelParams prm{0.08, 0.01, 0.3, 0.05, 0.05, 0.05, 0.05};
  for (int n = 0; n < 200; ++n) {
    double s = uniform(0.0, 1.0), i = uniform(0.0, 1.0 - s);
    double r = uniform(0.0, 1.0 - s - i), v = 1.0 - s - i - r;
    const auto d = epi_rhs({s, i, r, v}, uniform(0.01, 1.0), uniform(0.0, 1.0), prm);
    CHECK(std::abs(d[0] + d[1] + d[2] + d[3]) < 1e-15);
  }
}

TEST_CASE("raw right-hand side identities") {
  ModelParams prm{0.1, 0.05, 0.2, 0.05, 0.05, 0.05, 0.05};

  const auto no_infected = raw_rhs({900.0, 0.0, 50.0, 50.0, 1000.0}, 0.5, 0.1, prm);
  CHECK(no_infected[1] == 0.0);
  CHECK(no_infected[4] == doctest::Approx((prm.b - prm.mu) * 1000.0));

  prm.mu = prm.b;
  CHECK(raw_rhs({900.0, 0.0, 50.0, 50.0, 1000.0}, 0.5, 0.1, prm)[4] == 0.0);

  // dS + dI + dR + dV = dN identically
  for (int n = 0; n < 100; ++n) {
    ModelParams rp{uniform(0.01, 0.3), uniform(0.005, 0.2), uniform(0.0, 1.0),
                   0.05, 0.05, 0.05, 0.05};
    if (rp.mu > rp.b) std::swap(rp.mu, rp.b);
    const double N = uniform(10.0, 1e6);
    const double S = uniform(0.0, N), I = uniform(0.0, N - S), R = uniform(0.0, N - S - I);
    const auto d = raw_rhs({S, I, R, N - S - I - R, N}, uniform(0.01, 1.0),
                           uniform(0.0, 1.0), rp);
    const double gap = std::abs(d[0] + d[1] + d[2] + d[3] - d[4]);
    CHECK(gap <= 1e-12 * std::max(1.0, std::abs(d[4])));
  }

  CHECK_THROWS_AS(raw_rhs({1.0, 1.0, 1.0, 1.0, 0.0}, 0.5, 0.1, prm), std::domain_error);
}

TEST_CASE("coupled right-hand side structural zeros") {
  const Model m = preset("section6");
  // no investment and no knowledge: knowledge stock stays put
  const auto d1 = coupled_rhs({1.0, 0.5, 0.4, 0.1, 0.0}, {0.5, 0.1, 0.0}, m);
  CHECK(d1[4] == 0.0);
  // no expenditure and no stock: health stays put
  const auto d2 = coupled_rhs({1.0, 0.0, 0.4, 0.1, 0.5}, {0.5, 0.0, 0.2}, m);
  CHECK(d2[1] == 0.0);
  CHECK_THROWS_AS(coupled_rhs({0.0, 0.0, 0.4, 0.1, 0.0}, {0.5, 0.0, 0.0}, m),
                  std::domain_error);
}

TEST_CASE("integration reaches the endemic attractor") {
  const Model m = constant_rate_model(0.5, 0.1, 0.1, 0.05, 0.2);
  OdeOptions opts;
  opts.tol = 1e-10;
  const Trajectory tr = simulate_fractions(m, {0.9, 0.1, 0.0, 0.0}, 0, 0, 0, 200.0, 201, opts);
  const auto& yT = tr.y.back();
  CHECK(std::abs(yT[0] - 0.4) < 1e-6);
  CHECK(std::abs(yT[1] - 0.2) < 1e-6);
  CHECK(std::abs(yT[2] - 0.2) < 1e-6);
  CHECK(std::abs(yT[3] - 0.2) < 1e-6);

  // conservation along the way
  for (const auto& y : tr.y) {
    CHECK(std::abs(y[0] + y[1] + y[2] + y[3] - 1.0) <= 1e-9);
    for (double c : y) CHECK(c >= 0.0);
  }
}

TEST_CASE("subcritical transmission dies out") {
  const Model m = constant_rate_model(0.1, 0.1, 0.1, 0.05, 0.2);
  OdeOptions opts;
  opts.tol = 1e-10;
  const Trajectory tr = simulate_fractions(m, {0.5, 0.4, 0.05, 0.05}, 0, 0, 0, 200.0, 51, opts);
  CHECK(tr.y.back()[1] < 1e-6);
}

TEST_CASE("attractor follows the sign of (1-p)beta - (b+gamma)") {
  // supercritical: infected settle at the endemic level
  {
    const Model m = constant_rate_model(0.6, 0.05, 0.08, 0.04, 0.1);
    const EpiState target = endemic_eq(0.6, 0.05, 0.08, 0.1);
    OdeOptions opts;
    opts.tol = 1e-10;
    const Trajectory tr =
        simulate_fractions(m, {0.7, 0.25, 0.05, 0.0}, 0, 0, 0, 400.0, 41, opts);
    CHECK(std::abs(tr.y.back()[1] - target.i) < 1e-6);
  }
  // subcritical: infected vanish, state approaches the disease-free point
  {
    const Model m = constant_rate_model(0.05, 0.1, 0.1, 0.05, 0.3);
    OdeOptions opts;
    opts.tol = 1e-10;
    const Trajectory tr = simulate_fractions(m, {0.5, 0.4, 0.1, 0.0}, 0, 0, 0, 400.0, 41, opts);
    CHECK(std::abs(tr.y.back()[0] - 0.7) < 1e-5);
    CHECK(tr.y.back()[1] < 1e-8);
    CHECK(std::abs(tr.y.back()[3] - 0.3) < 1e-5);
  }
}

TEST_CASE("population growth matches the closed form") {
  const Model m = constant_rate_model(0.3, 0.1, 0.1, 0.05, 0.2);
  OdeOptions opts;
  opts.tol = 1e-10;
  const RawState y0{700.0, 100.0, 100.0, 100.0, 1000.0};
  const Trajectory tr = simulate_raw(m, y0, 0, 0, 0, 100.0, 11, opts);
  for (std::size_t k = 0; k < tr.t.size(); ++k) {
    const double expected = 1000.0 * std::exp((0.1 - 0.05) * tr.t[k]);
    CHECK(std::abs(tr.y[k][4] - expected) <= 1e-6 * expected);
  }
}

TEST_CASE("raw and fraction systems agree") {
  const Model m = constant_rate_model(0.4, 0.08, 0.09, 0.04, 0.25);
  OdeOptions opts;
  opts.tol = 1e-10;
  const double gap = check_raw_fraction_consistency(m, {600.0, 200.0, 150.0, 50.0, 1000.0},
                                                    0, 0, 0, 100.0, 101, opts);
  CHECK(gap <= 1e-7);

  // constant population: discrepancy at integrator-tolerance level
  Model flat = constant_rate_model(0.4, 0.08, 0.06, 0.06, 0.25);
  const double gap_flat = check_raw_fraction_consistency(
      flat, {600.0, 200.0, 150.0, 50.0, 1000.0}, 0, 0, 0, 100.0, 101, opts);
  CHECK(gap_flat <= 1e-8);

  // no infected anywhere: exact zeros in both systems
  const Trajectory raw = simulate_raw(m, {800.0, 0.0, 100.0, 100.0, 1000.0}, 0, 0, 0,
                                      50.0, 21, opts);
  const Trajectory frac = simulate_fractions(m, {0.8, 0.0, 0.1, 0.1}, 0, 0, 0, 50.0, 21, opts);
  for (std::size_t k = 0; k < raw.t.size(); ++k) {
    CHECK(raw.y[k][1] == 0.0);
    CHECK(frac.y[k][1] == 0.0);
  }
}

TEST_CASE("integrator order: halving the fixed step cuts the error by 4x or better") {
  const Model m = constant_rate_model(0.5, 0.1, 0.1, 0.05, 0.2);
  OdeOptions ref;
  ref.tol = 1e-12;
  const EpiState y0{0.9, 0.1, 0.0, 0.0};
  const auto reference = simulate_fractions(m, y0, 0, 0, 0, 20.0, 2, ref).y.back();

  auto endpoint_error = [&](double step) {
    OdeOptions o;
    o.method = OdeMethod::ClassicRK4;
    o.fixed_step = step;
    o.tol = 1e-6;  // unused by the fixed-step method
    const auto y = simulate_fractions(m, y0, 0, 0, 0, 20.0, 2, o).y.back();
    double err = 0.0;
    for (int c = 0; c < 4; ++c) err = std::max(err, std::abs(y[c] - reference[c]));
    return err;
  };
  const double coarse = endpoint_error(0.5);
  const double fine = endpoint_error(0.25);
  CHECK(coarse / fine >= 4.0);

  // adaptive method: tightening the tolerance reduces the endpoint error
  auto adaptive_error = [&](double tol) {
    OdeOptions o;
    o.tol = tol;
    const auto y = simulate_fractions(m, y0, 0, 0, 0, 20.0, 2, o).y.back();
    double err = 0.0;
    for (int c = 0; c < 4; ++c) err = std::max(err, std::abs(y[c] - reference[c]));
    return err;
  };
  CHECK(adaptive_error(1e-5) > adaptive_error(1e-9));
}

TEST_CASE("dense output matches a tight reference at interior sample times") {
  const Model m = constant_rate_model(0.5, 0.1, 0.1, 0.05, 0.2);
  OdeOptions loose;
  loose.tol = 1e-8;
  OdeOptions tight;
  tight.tol = 1e-12;
  const EpiState y0{0.9, 0.1, 0.0, 0.0};
  const Trajectory a = simulate_fractions(m, y0, 0, 0, 0, 30.0, 97, loose);
  const Trajectory bt = simulate_fractions(m, y0, 0, 0, 0, 30.0, 97, tight);
  for (std::size_t k = 0; k < a.t.size(); ++k) {
    for (int c = 0; c < 4; ++c) {
      CHECK(std::abs(a.y[k][c] - bt.y[k][c]) < 1e-6);
    }
  }
  CHECK(a.stats.steps_accepted > 0);
  CHECK(a.stats.method == "dopri5");
}

TEST_CASE("integration guards and errors") {
  CHECK_THROWS_AS(integrate([](double, std::span<const double>, std::span<double> d) {
                    d[0] = 0.0;
                  }, std::array<double, 1>{1.0}, 0.0, 1.0, std::array<double, 1>{1.0},
                  OdeOptions{.tol = 1e-2}),
                  std::invalid_argument);

  // blow-up: dy = y^2 diverges before t = 2; the error carries progress
  OdeOptions opts;
  opts.tol = 1e-10;
  opts.max_steps = 100000;
  bool threw = false;
  try {
    integrate([](double, std::span<const double> y, std::span<double> d) { d[0] = y[0] * y[0]; },
              std::array<double, 1>{1.0}, 0.0, 2.0, std::array<double, 1>{2.0}, opts);
  } catch (const IntegrationError& e) {
    threw = true;
    CHECK(e.last_t > 0.9);
    CHECK(e.last_t < 1.1);
    CHECK(e.last_y.size() == 1);
  }
  CHECK(threw);

  // guard clamps tiny undershoots and rejects large ones
  auto guard = fraction_guard(1e-10);
  std::vector<double> small{-5e-10, 0.5};
  guard(0.0, small);
  CHECK(small[0] == 0.0);
  std::vector<double> large{-1e-5, 0.5};
  CHECK_THROWS_AS(guard(0.0, large), IntegrationError);
}
