#include "epigrow/ode.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "epigrow/errors.hpp"

namespace epigrow {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// Dense-output coefficients (order-4 continuous extension).
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

using Vec = std::vector<double>;

struct DenseSeg {
  // y(t + s*h) = r1 + s*(r2 + (1-s)*(r3 + s*(r4 + (1-s)*r5)))
  Vec r1, r2, r3, r4, r5;
  double t, h;

  void eval(double ti, std::span<double> out) const {
    const double s = (ti - t) / h;
    const double s1 = 1.0 - s;
    for (std::size_t i = 0; i < r1.size(); ++i) {
      out[i] = r1[i] + s * (r2[i] + s1 * (r3[i] + s * (r4[i] + s1 * r5[i])));
    }
  }
};

Trajectory integrate_dopri5(const OdeRhs& rhs, std::span<const double> y0, double t0,
                            double t1, std::span<const double> samples,
                            const OdeOptions& opts) {
  const std::size_t n = y0.size();
  Trajectory out;
  out.stats.method = "dopri5";
  out.stats.tol = opts.tol;

  Vec y(y0.begin(), y0.end());
  Vec k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n);
  double t = t0;
  std::size_t next_sample = 0;

  auto emit_at = [&](double ts, const Vec& ys) {
    out.t.push_back(ts);
    out.y.push_back(ys);
  };
  while (next_sample < samples.size() && samples[next_sample] <= t0) {
    emit_at(t0, y);
    ++next_sample;
  }
  if (t1 <= t0) return out;

  rhs(t, y, k1);
  ++out.stats.rhs_evaluations;

  // initial step from the scaled norms of y and y'
  double h;
  {
    double d0 = 0.0, d1n = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sc = opts.tol + opts.tol * std::abs(y[i]);
      d0 = std::max(d0, std::abs(y[i]) / sc);
      d1n = std::max(d1n, std::abs(k1[i]) / sc);
    }
    h = (d1n > 1e-10) ? 0.01 * d0 / d1n : 1e-6 * (t1 - t0);
    h = std::clamp(h, 1e-10 * (t1 - t0), t1 - t0);
    if (h <= 0.0) h = (t1 - t0) * 1e-6;
  }

  bool rejected_last = false;
  while (t < t1) {
    if (out.stats.steps_accepted + out.stats.steps_rejected > opts.max_steps) {
      throw IntegrationError("integrate: step budget exceeded", t, y);
    }
    if (h < 1e-14 * std::max(1.0, std::abs(t))) {
      throw IntegrationError("integrate: step size underflow", t, y);
    }
    h = std::min(h, t1 - t);

    auto stage = [&](Vec& dst, double c, auto&&... terms) {
      for (std::size_t i = 0; i < n; ++i) {
        double acc = y[i];
        ((acc += h * terms.first * (*terms.second)[i]), ...);
        ytmp[i] = acc;
      }
      rhs(t + c * h, ytmp, dst);
      ++out.stats.rhs_evaluations;
    };
    using P = std::pair<double, const Vec*>;
    stage(k2, c2, P{a21, &k1});
    stage(k3, c3, P{a31, &k1}, P{a32, &k2});
    stage(k4, c4, P{a41, &k1}, P{a42, &k2}, P{a43, &k3});
    stage(k5, c5, P{a51, &k1}, P{a52, &k2}, P{a53, &k3}, P{a54, &k4});
    stage(k6, 1.0, P{a61, &k1}, P{a62, &k2}, P{a63, &k3}, P{a64, &k4}, P{a65, &k5});
    for (std::size_t i = 0; i < n; ++i) {
      ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    }
    rhs(t + h, ynew, k7);
    ++out.stats.rhs_evaluations;

    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                             e7 * k7[i]);
      const double sc = opts.tol + opts.tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      err += (ei / sc) * (ei / sc);
    }
    err = std::sqrt(err / n);

    if (err <= 1.0) {
      DenseSeg seg;
      seg.t = t;
      seg.h = h;
      seg.r1 = y;
      seg.r2.resize(n);
      seg.r3.resize(n);
      seg.r4.resize(n);
      seg.r5.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        const double dy = ynew[i] - y[i];
        seg.r2[i] = dy;
        seg.r3[i] = h * k1[i] - dy;
        seg.r4[i] = dy - h * k7[i] - seg.r3[i];
        seg.r5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] +
                         d7 * k7[i]);
      }
      t += h;
      y = ynew;
      if (opts.guard) opts.guard(t, y);
      ++out.stats.steps_accepted;
      Vec ys(n);
      while (next_sample < samples.size() && samples[next_sample] <= t + 1e-14) {
        const double ts = std::min(samples[next_sample], t);
        if (ts >= t - 1e-14) {
          emit_at(t, y);
        } else {
          seg.eval(ts, ys);
          emit_at(ts, ys);
        }
        ++next_sample;
      }
      k1 = k7;  // FSAL
      const double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
      h *= std::clamp(fac, 0.2, rejected_last ? 1.0 : 5.0);
      rejected_last = false;
    } else {
      ++out.stats.steps_rejected;
      rejected_last = true;
      h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
    }
  }
  while (next_sample < samples.size()) {
    emit_at(t, y);
    ++next_sample;
  }
  return out;
}

Trajectory integrate_rk4(const OdeRhs& rhs, std::span<const double> y0, double t0, double t1,
                         std::span<const double> samples, const OdeOptions& opts) {
  const std::size_t n = y0.size();
  Trajectory out;
  out.stats.method = "rk4";
  out.stats.tol = opts.tol;
  const double hbase = opts.fixed_step > 0.0 ? opts.fixed_step : (t1 - t0) / 2000.0;

  Vec y(y0.begin(), y0.end());
  Vec k1(n), k2(n), k3(n), k4(n), ytmp(n);
  double t = t0;

  auto step_to = [&](double target) {
    const double span = target - t;
    if (span <= 0.0) return;
    const long m = std::max<long>(1, static_cast<long>(std::ceil(span / hbase)));
    const double h = span / m;
    for (long s = 0; s < m; ++s) {
      rhs(t, y, k1);
      for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + 0.5 * h * k1[i];
      rhs(t + 0.5 * h, ytmp, k2);
      for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + 0.5 * h * k2[i];
      rhs(t + 0.5 * h, ytmp, k3);
      for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * k3[i];
      rhs(t + h, ytmp, k4);
      for (std::size_t i = 0; i < n; ++i) {
        y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      }
      t += h;
      out.stats.rhs_evaluations += 4;
      ++out.stats.steps_accepted;
      if (opts.guard) opts.guard(t, y);
    }
    t = target;
  };

  for (double ts : samples) {
    step_to(ts);
    out.t.push_back(ts);
    out.y.emplace_back(y);
  }
  return out;
}

}  // namespace

Trajectory integrate(const OdeRhs& rhs, std::span<const double> y0, double t0, double t1,
                     std::span<const double> sample_times, const OdeOptions& opts) {
  if (opts.tol < 1e-12 || opts.tol > 1e-3) {
    throw std::invalid_argument("integrate: tol must lie in [1e-12, 1e-3]");
  }
  if (t1 < t0) throw std::invalid_argument("integrate: t1 must be >= t0");
  for (std::size_t k = 0; k + 1 < sample_times.size(); ++k) {
    if (sample_times[k] > sample_times[k + 1]) {
      throw std::invalid_argument("integrate: sample times must be non-decreasing");
    }
  }
  if (!sample_times.empty() &&
      (sample_times.front() < t0 - 1e-12 || sample_times.back() > t1 + 1e-12)) {
    throw std::invalid_argument("integrate: sample times must lie within [t0, t1]");
  }
  return opts.method == OdeMethod::DormandPrince54
             ? integrate_dopri5(rhs, y0, t0, t1, sample_times, opts)
             : integrate_rk4(rhs, y0, t0, t1, sample_times, opts);
}

Trajectory integrate_uniform(const OdeRhs& rhs, std::span<const double> y0, double t0,
                             double t1, int n_samples, const OdeOptions& opts) {
  std::vector<double> ts(std::max(2, n_samples));
  const int n = static_cast<int>(ts.size());
  for (int k = 0; k < n; ++k) ts[k] = t0 + (t1 - t0) * k / (n - 1);
  return integrate(rhs, y0, t0, t1, ts, opts);
}

}  // namespace epigrow
