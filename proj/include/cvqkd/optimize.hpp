#pragma once

#include <functional>

namespace cvqkd {

struct OptResult {
  double arg = 0.0;
  double value = 0.0;
};

// Golden-section maximization of a unimodal function on [lo, hi].
// Stops when the bracket is below arg_tol or the value change is below
// value_tol.
OptResult golden_max(const std::function<double(double)>& f, double lo, double hi,
                     double arg_tol = 1e-6, double value_tol = 1e-10, int max_iter = 200);

// Maximization over a log-spaced argument: golden section on log(x).
OptResult golden_max_log(const std::function<double(double)>& f, double lo, double hi,
                         double arg_tol = 1e-4, double value_tol = 1e-10);

struct RootResult {
  double root = 0.0;
  bool bracketed = true;  // false: no sign change, root is the returned endpoint
};

// Bisection root of f on [lo, hi] to absolute tolerance xtol. When f has the
// same sign at both ends, returns the endpoint with the smaller |f| and
// bracketed = false.
RootResult bisect_root(const std::function<double(double)>& f, double lo, double hi,
                       double xtol = 1e-6, int max_iter = 200);

}  // namespace cvqkd
