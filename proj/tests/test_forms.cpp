#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "epigrow/forms.hpp"
#include "epigrow/model.hpp"
#include "epigrow/validate.hpp"
#include "oracles.hpp"

using namespace epigrow;
using testing::central_diff;
using testing::close_rel;
using testing::uniform;

TEST_CASE("transmission rate forms") {
  TransmissionSpec product{TransmissionForm::Product, 0.023, 0.0, 1.0};
  const RateEval origin = beta_eval(product, 0.0, 0.0, 0.0);
  CHECK(origin.value == doctest::Approx(0.023).epsilon(1e-15));
  CHECK(origin.dA == 0.0);
  CHECK(origin.de == 0.0);
  CHECK(origin.dh == 0.0);

  TransmissionSpec knowledge{TransmissionForm::KnowledgeOnly, 0.023, 0.0, 1.0};
  const RateEval k0 = beta_eval(knowledge, 0.0, 0.0, 0.0);
  CHECK(k0.value == doctest::Approx(0.023).epsilon(1e-15));
  CHECK(k0.de == doctest::Approx(-0.023).epsilon(1e-15));

  TransmissionSpec health{TransmissionForm::HealthOnly, 0.023, 0.023, 1.0};
  const RateEval h1 = beta_eval(health, 0.0, 0.0, 1.0);
  CHECK(h1.value == doctest::Approx(0.023 + 0.023 * std::exp(-1.0)).epsilon(1e-15));
  const double fd = central_diff(
      [&](double h) { return beta_eval(health, 0.0, 0.0, h).value; }, 1.0);
  CHECK(close_rel(h1.dh, fd, 1e-5));

  CHECK(health.bar_beta() == doctest::Approx(0.046));
  CHECK(knowledge.bar_beta() == doctest::Approx(0.023));

  CHECK_THROWS_AS(beta_eval(product, -0.1, 0.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(beta_eval(product, 0.0, -1e-9, 0.0), std::domain_error);
}

TEST_CASE("recovery rate forms") {
  RecoverySpec product{RecoveryForm::Product, 1.0, 1.01, 1.0};
  CHECK(gamma_eval(product, 0.0, 0.0, 0.0).value == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(product.floor_value() == doctest::Approx(0.01));

  RecoverySpec health{RecoveryForm::HealthOnly, 1.0, 1.01, 1.0};
  CHECK(gamma_eval(health, 0.0, 0.0, 1e8).value == doctest::Approx(1.01).epsilon(1e-14));

  const RateEval at1 = gamma_eval(product, 1.0, 1.0, 1.0);
  CHECK(at1.value == doctest::Approx(1.01 - std::exp(-1.0)).epsilon(1e-15));
  const double fdA = central_diff(
      [&](double A) { return gamma_eval(product, A, 1.0, 1.0).value; }, 1.0);
  const double fde = central_diff(
      [&](double e) { return gamma_eval(product, 1.0, e, 1.0).value; }, 1.0);
  const double fdh = central_diff(
      [&](double h) { return gamma_eval(product, 1.0, 1.0, h).value; }, 1.0);
  CHECK(close_rel(at1.dA, fdA, 1e-5));
  CHECK(close_rel(at1.de, fde, 1e-5));
  CHECK(close_rel(at1.dh, fdh, 1e-5));

  RecoverySpec bad{RecoveryForm::Product, 1.01, 1.0, 1.0};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("knowledge production") {
  KnowledgeSpec spec{0.023, 0.023, 1.0};
  CHECK(knowledge_eval(spec, 0.0, 5.0).value == 0.0);
  CHECK(knowledge_eval(spec, 3.0, 0.0).value == 0.0);

  const KnowledgeEval at1 = knowledge_eval(spec, 1.0, 1.0);
  const double fdA = central_diff(
      [&](double A) { return knowledge_eval(spec, A, 1.0).value; }, 1.0);
  const double fde = central_diff(
      [&](double e) { return knowledge_eval(spec, 1.0, e).value; }, 1.0);
  CHECK(close_rel(at1.dA, fdA, 1e-5));
  CHECK(close_rel(at1.de, fde, 1e-5));

  // sign and per-coordinate concavity on a 20x20 interior grid
  const double d = 1e-4;
  for (int a = 1; a <= 20; ++a) {
    for (int b = 1; b <= 20; ++b) {
      const double A = 0.05 * a, e = 0.05 * b;
      const KnowledgeEval E = knowledge_eval(spec, A, e);
      CHECK(E.dA > 0.0);
      CHECK(E.de > 0.0);
      const double eAA = (knowledge_eval(spec, A + d, e).value - 2.0 * E.value +
                          knowledge_eval(spec, A - d, e).value) / (d * d);
      const double eee = (knowledge_eval(spec, A, e + d).value - 2.0 * E.value +
                          knowledge_eval(spec, A, e - d).value) / (d * d);
      CHECK(eAA < 1e-8);
      CHECK(eee < 1e-8);
    }
  }

  CHECK_THROWS_AS(knowledge_eval(spec, -1.0, 0.0), std::domain_error);

  KnowledgeSpec channel{1.0, 1.0, 0.02, 0.05, 20.0};
  CHECK(channel.e1_origin() == doctest::Approx(1.0));
  CHECK(knowledge_eval(channel, 0.0, 5.0).value == 0.0);
  CHECK(knowledge_eval(channel, 1.0, 0.0).value > 0.0);  // investment-only channel
}

TEST_CASE("physical production") {
  ProductionSpec spec;  // psi = 0.3
  const ProductionEval unit = production_eval(spec, 1.0, 1.0);
  CHECK(unit.value == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(unit.f1 == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(unit.f2 == doctest::Approx(0.7).epsilon(1e-15));

  const ProductionEval half = production_eval(spec, 1.0, 0.5);
  CHECK(half.value == doctest::Approx(std::pow(0.5, 0.7)).epsilon(1e-14));
  const double k0 = 1.0, l0 = 0.5;
  CHECK(close_rel(half.f1, central_diff([&](double k) {
    return production_eval(spec, k, l0).value; }, k0), 1e-5));
  CHECK(close_rel(half.f2, central_diff([&](double l) {
    return production_eval(spec, k0, l).value; }, l0), 1e-5));
  CHECK(close_rel(half.f11, central_diff([&](double k) {
    return production_eval(spec, k, l0).f1; }, k0), 1e-5));
  CHECK(close_rel(half.f12, central_diff([&](double l) {
    return production_eval(spec, k0, l).f1; }, l0), 1e-5));
  CHECK(close_rel(half.f22, central_diff([&](double l) {
    return production_eval(spec, k0, l).f2; }, l0), 1e-5));

  // constant-returns Hessian is singular at any interior point
  for (int t = 0; t < 5; ++t) {
    const double k = uniform(0.2, 8.0), l = uniform(0.1, 1.0);
    const ProductionEval f = production_eval(spec, k, l);
    const double det = f.f11 * f.f22 - f.f12 * f.f12;
    CHECK(std::abs(det) <= 1e-12 * std::abs(f.f11 * f.f22));
  }

  CHECK_THROWS_AS(production_eval(spec, 0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(production_eval(spec, 1.0, 0.0), std::domain_error);
}

TEST_CASE("health production") {
  ProductionSpec spec;  // psi1=0.2, psi2=0.5, psi3=psi4=0.5
  CHECK(health_eval(spec, 0.0).value == 0.0);
  const HealthEval at = health_eval(spec, 0.8);
  CHECK(at.value == doctest::Approx(0.5 - 0.5 * std::sqrt(0.2)).epsilon(1e-14));
  CHECK(close_rel(at.dm, central_diff([&](double m) {
    return health_eval(spec, m).value; }, 0.8), 1e-5));

  const double gp0 = health_eval(spec, 0.0).dm;
  CHECK(std::isfinite(gp0));
  CHECK(gp0 == doctest::Approx(0.5 * 0.5 * std::pow(0.2, -0.5)).epsilon(1e-14));
  CHECK(health_second_derivative(spec, 0.3) < 0.0);
  CHECK_THROWS_AS(health_eval(spec, -0.1), std::domain_error);
}

TEST_CASE("utility") {
  UtilitySpec log_u{UtilityForm::Log, 2.0};
  CHECK(utility_eval(log_u, 1.0).value == 0.0);
  CHECK(utility_eval(log_u, 1.0).dc == 1.0);

  UtilitySpec crra{UtilityForm::CRRA, 2.0};
  CHECK(utility_eval(crra, 2.0).dc == doctest::Approx(0.25).epsilon(1e-15));

  // marginal utility blows up monotonically toward zero consumption
  double prev = utility_eval(log_u, 1.0).dc;
  for (double c : {1e-2, 1e-4, 1e-6, 1e-8}) {
    const double dc = utility_eval(log_u, c).dc;
    CHECK(dc > prev);
    prev = dc;
  }
  CHECK(prev >= 1e7);
  CHECK_THROWS_AS(utility_eval(log_u, 0.0), std::domain_error);
  CHECK_THROWS_AS(utility_eval(log_u, -1.0), std::domain_error);
}

TEST_CASE("analytic partials match central differences on random points") {
  const TransmissionForm bforms[] = {TransmissionForm::KnowledgeOnly,
                                     TransmissionForm::HealthOnly, TransmissionForm::Product};
  const RecoveryForm gforms[] = {RecoveryForm::Product, RecoveryForm::HealthOnly};
  int checked = 0;
  for (int n = 0; n < 1000; ++n) {
    const double A = uniform(0.0, 3.0), e = uniform(0.0, 3.0), h = uniform(0.0, 3.0);

    TransmissionSpec bs{bforms[n % 3], uniform(0.01, 0.5), uniform(0.0, 0.3), uniform(0.0, 2.0)};
    const RateEval bv = beta_eval(bs, A, e, h);
    CHECK(close_rel(bv.dA, central_diff([&](double x) {
      return beta_eval(bs, x, e, h).value; }, A), 1e-5));
    CHECK(close_rel(bv.de, central_diff([&](double x) {
      return beta_eval(bs, A, x, h).value; }, e), 1e-5));
    CHECK(close_rel(bv.dh, central_diff([&](double x) {
      return beta_eval(bs, A, e, x).value; }, h), 1e-5));
    CHECK(bv.dA <= 0.0);
    CHECK(bv.de <= 0.0);
    CHECK(bv.dh <= 0.0);
    CHECK(bv.value > 0.0);
    CHECK(bv.value <= bs.bar_beta() + 1e-15);

    const double g0 = uniform(0.01, 1.0);
    RecoverySpec gs{gforms[n % 2], g0, g0 + uniform(0.005, 0.5), uniform(0.0, 2.0)};
    const RateEval gv = gamma_eval(gs, A, e, h);
    CHECK(close_rel(gv.dA, central_diff([&](double x) {
      return gamma_eval(gs, x, e, h).value; }, A), 1e-5));
    CHECK(close_rel(gv.de, central_diff([&](double x) {
      return gamma_eval(gs, A, x, h).value; }, e), 1e-5));
    CHECK(close_rel(gv.dh, central_diff([&](double x) {
      return gamma_eval(gs, A, e, x).value; }, h), 1e-5));
    CHECK(gv.dA >= 0.0);
    CHECK(gv.de >= 0.0);
    CHECK(gv.dh >= 0.0);
    CHECK(gv.value >= gs.floor_value() - 1e-15);
    CHECK(gv.value < gs.gamma1);

    KnowledgeSpec ks{uniform(0.01, 2.0), uniform(0.01, 2.0), uniform(0.1, 3.0),
                     n % 4 == 0 ? uniform(0.01, 0.2) : 0.0, n % 4 == 0 ? uniform(1.0, 20.0) : 0.0};
    const KnowledgeEval Ev = knowledge_eval(ks, A, e);
    CHECK(close_rel(Ev.dA, central_diff([&](double x) {
      return knowledge_eval(ks, x, e).value; }, A), 1e-5));
    CHECK(close_rel(Ev.de, central_diff([&](double x) {
      return knowledge_eval(ks, A, x).value; }, e), 1e-5));

    ProductionSpec ps{uniform(0.1, 0.9), uniform(0.05, 1.0), uniform(0.1, 0.9), 0.5, 0.5};
    const double k = uniform(0.1, 10.0), l = uniform(0.05, 1.0), m = uniform(0.0, 3.0);
    const ProductionEval fv = production_eval(ps, k, l);
    CHECK(close_rel(fv.f1, central_diff([&](double x) {
      return production_eval(ps, x, l).value; }, k), 1e-5));
    CHECK(close_rel(fv.f2, central_diff([&](double x) {
      return production_eval(ps, k, x).value; }, l), 1e-5));
    CHECK(close_rel(fv.f11, central_diff([&](double x) {
      return production_eval(ps, x, l).f1; }, k), 1e-5));
    CHECK(close_rel(fv.f12, central_diff([&](double x) {
      return production_eval(ps, k, x).f1; }, l), 1e-5));
    CHECK(close_rel(fv.f22, central_diff([&](double x) {
      return production_eval(ps, k, x).f2; }, l), 1e-5));
    CHECK(fv.f1 > 0.0);
    CHECK(fv.f2 > 0.0);

    const HealthEval gvh = health_eval(ps, m);
    CHECK(close_rel(gvh.dm, central_diff([&](double x) {
      return health_eval(ps, x).value; }, m), 1e-5));
    CHECK(gvh.dm > 0.0);

    UtilitySpec us{n % 2 ? UtilityForm::Log : UtilityForm::CRRA, uniform(1.5, 4.0)};
    const double c = uniform(0.05, 5.0);
    const UtilityEval uv = utility_eval(us, c);
    CHECK(close_rel(uv.dc, central_diff([&](double x) {
      return utility_eval(us, x).value; }, c), 1e-5));
    CHECK(uv.dc > 0.0);
    ++checked;
  }
  CHECK(checked == 1000);
}

TEST_CASE("rates are monotone along coordinate rays") {
  TransmissionSpec bs{TransmissionForm::Product, 0.1, 0.0, 0.7};
  RecoverySpec gs{RecoveryForm::Product, 0.05, 0.08, 0.9};
  double prev_b = beta_eval(bs, 0.0, 0.5, 0.5).value;
  double prev_g = gamma_eval(gs, 0.0, 0.5, 0.5).value;
  for (double t = 0.25; t <= 5.0; t += 0.25) {
    const double bnow = beta_eval(bs, t, 0.5, 0.5).value;
    const double gnow = gamma_eval(gs, t, 0.5, 0.5).value;
    CHECK(bnow <= prev_b + 1e-15);
    CHECK(gnow >= prev_g - 1e-15);
    prev_b = bnow;
    prev_g = gnow;
  }
}

TEST_CASE("exact zeros of g and E") {
  ProductionSpec ps;
  CHECK(health_eval(ps, 0.0).value == 0.0);
  KnowledgeSpec ks{0.4, 0.9, 2.0};
  for (double t : {0.0, 0.3, 1.7, 9.0}) {
    CHECK(knowledge_eval(ks, t, 0.0).value == 0.0);
    CHECK(knowledge_eval(ks, 0.0, t).value == 0.0);
  }
}

TEST_CASE("assumption validator on the baseline preset") {
  const Model m = preset("section6");
  const ValidationReport rep = validate_assumptions(m);
  CHECK(rep.ok());
  CHECK(rep.has("transmission_normalized_at_origin", CheckStatus::Note));
  CHECK(rep.has("recovery_ceiling_within_unit", CheckStatus::Note));
  CHECK(rep.has("knowledge_joint_concavity", CheckStatus::Note));
  CHECK(rep.has("birth_rate_at_least_death_rate", CheckStatus::Pass));
  CHECK(rep.has("transmission_bounds", CheckStatus::SampledPass));
  CHECK(rep.has("knowledge_costate_detachment", CheckStatus::SampledPass));
  CHECK(!rep.text().empty());
}

TEST_CASE("assumption validator flags hard violations") {
  Model m = preset("section6");
  m.params.b = 0.001;  // below mu
  const ValidationReport rep = validate_assumptions(m);
  CHECK(!rep.ok());
  CHECK(rep.has("birth_rate_at_least_death_rate", CheckStatus::Fail));

  Model bad = preset("section6");
  bad.specs.gamma.gamma0 = 1.02;  // gamma0 >= gamma1
  const ValidationReport rep2 = validate_assumptions(bad);
  CHECK(!rep2.ok());
  CHECK(rep2.has("spec_invariants", CheckStatus::Fail));
}
