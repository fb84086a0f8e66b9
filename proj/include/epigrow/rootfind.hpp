#pragma once

#include <functional>
#include <optional>
#include <vector>

namespace epigrow {

/// Bracketed scalar root via Brent's method. Requires f(lo)*f(hi) <= 0.
double brent(const std::function<double(double)>& f, double lo, double hi,
             double xtol = 1e-14, int max_iter = 200);

/// Expands hi geometrically until f changes sign, then calls brent.
/// Throws SolverError when no bracket is found before hi_limit.
double bracket_upward(const std::function<double(double)>& f, double lo, double hi0,
                      double hi_limit);

struct ScanResult {
  std::vector<double> roots;
  int sign_changes = 0;  ///< between consecutive valid grid points
};

/// Scans f on a uniform grid; counts sign changes between consecutive
/// points where f is defined (nullopt marks invalid points) and refines
/// each bracket with brent.
ScanResult scan_roots(const std::function<std::optional<double>(double)>& f, double lo,
                      double hi, int n);

struct NewtonOptions {
  double tol = 1e-12;           ///< max-norm residual target
  int max_iter = 120;
  double fd_step = 1e-7;        ///< relative forward-difference step
  std::vector<double> lower;    ///< optional per-component lower bounds
};

struct NewtonResult {
  std::vector<double> x;
  double residual = 0.0;
  bool converged = false;
  int iterations = 0;
};

/// Damped Newton with a numeric Jacobian and halving line search.
/// F must return a residual vector of the same dimension as x. Steps that
/// leave the lower-bounded box are pulled back onto it.
NewtonResult damped_newton(
    const std::function<std::optional<std::vector<double>>(const std::vector<double>&)>& F,
    std::vector<double> x0, const NewtonOptions& opts = {});

/// Deterministic Latin hypercube sample of n points in [lo, hi]^dim.
std::vector<std::vector<double>> latin_hypercube(const std::vector<double>& lo,
                                                 const std::vector<double>& hi, int n,
                                                 unsigned seed);

}  // namespace epigrow
