#include "epigrow/rootfind.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>

#include "epigrow/errors.hpp"

namespace epigrow {

double brent(const std::function<double(double)>& f, double lo, double hi, double xtol,
             int max_iter) {
  double a = lo, b = hi;
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (fa * fb > 0.0) throw SolverError("brent: endpoints do not bracket a root", std::min(std::abs(fa), std::abs(fb)));
  if (std::abs(fa) < std::abs(fb)) {
    std::swap(a, b);
    std::swap(fa, fb);
  }
  double c = a, fc = fa, d = b - a;
  bool mflag = true;
  for (int it = 0; it < max_iter; ++it) {
    if (fb == 0.0 || std::abs(b - a) < xtol * std::max(1.0, std::abs(b))) return b;
    double s;
    if (fa != fc && fb != fc) {
      s = a * fb * fc / ((fa - fb) * (fa - fc)) + b * fa * fc / ((fb - fa) * (fb - fc)) +
          c * fa * fb / ((fc - fa) * (fc - fb));
    } else {
      s = b - fb * (b - a) / (fb - fa);
    }
    const double lo_s = (3.0 * a + b) / 4.0;
    const bool cond = !((s > std::min(lo_s, b) && s < std::max(lo_s, b))) ||
                      (mflag && std::abs(s - b) >= std::abs(b - c) / 2.0) ||
                      (!mflag && std::abs(s - b) >= std::abs(c - d) / 2.0) ||
                      (mflag && std::abs(b - c) < xtol) || (!mflag && std::abs(c - d) < xtol);
    if (cond) {
      s = 0.5 * (a + b);
      mflag = true;
    } else {
      mflag = false;
    }
    const double fs = f(s);
    d = c;
    c = b;
    fc = fb;
    if (fa * fs < 0.0) {
      b = s;
      fb = fs;
    } else {
      a = s;
      fa = fs;
    }
    if (std::abs(fa) < std::abs(fb)) {
      std::swap(a, b);
      std::swap(fa, fb);
    }
  }
  return b;
}

double bracket_upward(const std::function<double(double)>& f, double lo, double hi0,
                      double hi_limit) {
  const double flo = f(lo);
  if (flo == 0.0) return lo;
  double hi = hi0;
  while (hi < hi_limit) {
    if (flo * f(hi) <= 0.0) return brent(f, lo, hi);
    hi *= 2.0;
  }
  if (flo * f(hi_limit) <= 0.0) return brent(f, lo, hi_limit);
  throw SolverError("bracket_upward: no sign change before limit", std::abs(flo));
}

ScanResult scan_roots(const std::function<std::optional<double>(double)>& f, double lo,
                      double hi, int n) {
  ScanResult out;
  if (n < 2) return out;
  const double step = (hi - lo) / (n - 1);
  std::optional<double> prev;
  double prev_t = lo;
  for (int k = 0; k < n; ++k) {
    const double t = lo + k * step;
    const auto v = f(t);
    if (v && std::isfinite(*v)) {
      if (prev) {
        if (*prev == 0.0) {
          out.roots.push_back(prev_t);
          ++out.sign_changes;
        } else if (*prev * *v < 0.0) {
          ++out.sign_changes;
          out.roots.push_back(brent([&](double x) { return f(x).value_or(0.0); }, prev_t, t));
        }
      }
      prev = v;
      prev_t = t;
    } else {
      prev.reset();
    }
  }
  return out;
}

NewtonResult damped_newton(
    const std::function<std::optional<std::vector<double>>(const std::vector<double>&)>& F,
    std::vector<double> x0, const NewtonOptions& opts) {
  const int n = static_cast<int>(x0.size());
  auto clamp = [&](std::vector<double>& x) {
    if (opts.lower.size() == x.size()) {
      for (std::size_t k = 0; k < x.size(); ++k) x[k] = std::max(x[k], opts.lower[k]);
    }
  };
  auto norm = [](const std::vector<double>& r) {
    double m = 0.0;
    for (double v : r) m = std::max(m, std::abs(v));
    return m;
  };

  clamp(x0);
  auto r0 = F(x0);
  NewtonResult res;
  res.x = x0;
  if (!r0) return res;
  double rn = norm(*r0);
  res.residual = rn;

  std::vector<double> x = x0, r = *r0;
  for (int it = 0; it < opts.max_iter; ++it) {
    if (rn <= opts.tol) {
      res = {x, rn, true, it};
      return res;
    }
    Eigen::MatrixXd J(n, n);
    bool jac_ok = true;
    for (int j = 0; j < n && jac_ok; ++j) {
      const double h = opts.fd_step * std::max(1.0, std::abs(x[j]));
      auto xp = x;
      xp[j] += h;
      const auto rp = F(xp);
      if (!rp) {
        xp = x;
        xp[j] -= h;
        const auto rm = F(xp);
        if (!rm) {
          jac_ok = false;
          break;
        }
        for (int i = 0; i < n; ++i) J(i, j) = (r[i] - (*rm)[i]) / h;
      } else {
        for (int i = 0; i < n; ++i) J(i, j) = ((*rp)[i] - r[i]) / h;
      }
    }
    if (!jac_ok) break;

    Eigen::VectorXd rv(n);
    for (int i = 0; i < n; ++i) rv(i) = r[i];
    Eigen::VectorXd dx = J.fullPivLu().solve(-rv);
    if (!dx.allFinite()) break;

    double lambda = 1.0;
    bool stepped = false;
    for (int back = 0; back < 40; ++back) {
      std::vector<double> xn(x);
      for (int i = 0; i < n; ++i) xn[i] += lambda * dx(i);
      clamp(xn);
      const auto rn_vec = F(xn);
      if (rn_vec) {
        const double rr = norm(*rn_vec);
        if (rr < rn) {
          x = std::move(xn);
          r = *rn_vec;
          rn = rr;
          stepped = true;
          break;
        }
      }
      lambda *= 0.5;
    }
    if (!stepped) break;
    res = {x, rn, rn <= opts.tol, it + 1};
  }
  res.x = x;
  res.residual = rn;
  res.converged = rn <= opts.tol;
  return res;
}

std::vector<std::vector<double>> latin_hypercube(const std::vector<double>& lo,
                                                 const std::vector<double>& hi, int n,
                                                 unsigned seed) {
  const std::size_t dim = lo.size();
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<std::vector<double>> pts(n, std::vector<double>(dim));
  for (std::size_t d = 0; d < dim; ++d) {
    std::vector<int> perm(n);
    for (int k = 0; k < n; ++k) perm[k] = k;
    std::shuffle(perm.begin(), perm.end(), rng);
    for (int k = 0; k < n; ++k) {
      const double u = (perm[k] + unif(rng)) / n;
      pts[k][d] = lo[d] + u * (hi[d] - lo[d]);
    }
  }
  return pts;
}

}  // namespace epigrow
