#pragma once

#include <functional>

namespace zipfscale {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int intervals = 0;
};

struct QuadratureOptions {
  double rel_tol = 1e-12;
  double abs_tol = 0.0;
  int max_intervals = 4000;
};

/// Globally adaptive Gauss-Kronrod (7/15) integration of f over the finite
/// interval [a, b]. The interval with the largest error estimate is bisected
/// until the summed estimate meets max(abs_tol, rel_tol * |value|).
QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, const QuadratureOptions& options = {});

}  // namespace zipfscale
