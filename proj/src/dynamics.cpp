#include "epigrow/dynamics.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "epigrow/errors.hpp"

namespace epigrow {

std::array<double, 4> epi_rhs(const EpiState& y, double beta, double gamma,
                              const ModelParams& params) {
  const double infections = beta * y.s * y.i;
  return {
      (1.0 - params.p) * params.b - params.b * y.s - infections,
      infections - (gamma + params.b) * y.i,
      gamma * y.i - params.b * y.r,
      params.p * params.b - params.b * y.v,
  };
}

std::array<double, 5> raw_rhs(const RawState& y, double beta, double gamma,
                              const ModelParams& params) {
  if (y.N <= 0.0) throw std::domain_error("raw_rhs: N must be > 0");
  const double infections = beta * y.S * y.I / y.N;
  return {
      (1.0 - params.p) * params.b * y.N - params.mu * y.S - infections,
      infections - (gamma + params.mu) * y.I,
      gamma * y.I - params.mu * y.R,
      params.p * params.b * y.N - params.mu * y.V,
      (params.b - params.mu) * y.N,
  };
}

std::array<double, 5> coupled_rhs(const PlannerState& y, const Controls& u, const Model& model) {
  if (y.k <= 0.0) throw std::domain_error("coupled_rhs: k must be > 0");
  const auto& prm = model.params;
  const double beta = model.beta(u.A, y.e, y.h).value;
  const double gamma = model.gamma(u.A, y.e, y.h).value;
  const double l = y.labor();
  const double f = model.production(y.k, l).value;
  const double g = model.health(u.m).value;
  const double E = model.knowledge(u.A, y.e).value;
  return {
      f - u.m - u.A - u.c - (prm.delta_K + prm.b - prm.mu) * y.k,
      g - (prm.delta_H + prm.b - prm.mu) * y.h,
      (1.0 - prm.p) * prm.b - prm.b * y.s - beta * y.s * y.i,
      beta * y.s * y.i - (gamma + prm.b) * y.i,
      E - prm.delta_E * y.e,
  };
}

StateGuard fraction_guard(double tol) {
  const double slack = 10.0 * tol;
  return [slack](double t, std::span<double> y) {
    for (double& c : y) {
      if (c < 0.0) {
        if (c < -slack) {
          throw IntegrationError("fraction component below -10*tol",
                                 t, std::vector<double>(y.begin(), y.end()));
        }
        c = 0.0;
      }
    }
  };
}

Trajectory simulate_fractions(const Model& model, const EpiState& y0, double A, double e,
                              double h, double t1, int n_samples, const OdeOptions& opts) {
  const double beta = model.beta(A, e, h).value;
  const double gamma = model.gamma(A, e, h).value;
  OdeOptions o = opts;
  if (!o.guard) o.guard = fraction_guard(o.tol);
  const ModelParams prm = model.params;
  OdeRhs rhs = [beta, gamma, prm](double, std::span<const double> y, std::span<double> dy) {
    const auto d = epi_rhs({y[0], y[1], y[2], y[3]}, beta, gamma, prm);
    std::copy(d.begin(), d.end(), dy.begin());
  };
  const std::array<double, 4> y0a{y0.s, y0.i, y0.r, y0.v};
  return integrate_uniform(rhs, y0a, 0.0, t1, n_samples, o);
}

Trajectory simulate_raw(const Model& model, const RawState& y0, double A, double e, double h,
                        double t1, int n_samples, const OdeOptions& opts) {
  const double beta = model.beta(A, e, h).value;
  const double gamma = model.gamma(A, e, h).value;
  const ModelParams prm = model.params;
  OdeRhs rhs = [beta, gamma, prm](double, std::span<const double> y, std::span<double> dy) {
    const auto d = raw_rhs({y[0], y[1], y[2], y[3], y[4]}, beta, gamma, prm);
    std::copy(d.begin(), d.end(), dy.begin());
  };
  const std::array<double, 5> y0a{y0.S, y0.I, y0.R, y0.V, y0.N};
  return integrate_uniform(rhs, y0a, 0.0, t1, n_samples, opts);
}

Trajectory simulate_planner(const Model& model, const PlannerState& y0, const ControlPath& u,
                            double t1, int n_samples, const OdeOptions& opts) {
  OdeRhs rhs = [&model, &u](double t, std::span<const double> y, std::span<double> dy) {
    const auto d = coupled_rhs({y[0], y[1], y[2], y[3], y[4]}, u(t), model);
    std::copy(d.begin(), d.end(), dy.begin());
  };
  const std::array<double, 5> y0a{y0.k, y0.h, y0.s, y0.i, y0.e};
  return integrate_uniform(rhs, y0a, 0.0, t1, n_samples, opts);
}

double check_raw_fraction_consistency(const Model& model, const RawState& y0, double A,
                                      double e, double h, double horizon, int n_samples,
                                      const OdeOptions& opts) {
  if (y0.N <= 0.0) throw std::domain_error("check_raw_fraction_consistency: N0 must be > 0");
  const EpiState f0{y0.S / y0.N, y0.I / y0.N, y0.R / y0.N, y0.V / y0.N};
  const Trajectory raw = simulate_raw(model, y0, A, e, h, horizon, n_samples, opts);
  const Trajectory frac = simulate_fractions(model, f0, A, e, h, horizon, n_samples, opts);
  double worst = 0.0;
  for (std::size_t k = 0; k < raw.t.size(); ++k) {
    const auto& yr = raw.y[k];
    const auto& yf = frac.y[k];
    const double N = yr[4];
    for (int c = 0; c < 4; ++c) {
      worst = std::max(worst, std::abs(yr[c] / N - yf[c]));
    }
  }
  return worst;
}

}  // namespace epigrow
