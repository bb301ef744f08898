#pragma once

#include <functional>

namespace bosonize {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int evaluations = 0;
  int subdivisions = 0;
  bool converged = false;
};

// Globally adaptive 7/15-point Gauss-Kronrod on [a, b]: the interval with the
// largest error estimate is bisected until the summed estimate drops below
// max(abs_tol, rel_tol * |value|) or the subdivision budget is spent.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b, double abs_tol,
                                    double rel_tol, int max_subdivisions = 4000);

}  // namespace bosonize
