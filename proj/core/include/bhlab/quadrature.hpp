#pragma once

#include <functional>

namespace bhlab {

struct QuadratureResult {
  double value = 0;
  double error = 0;
  int intervals = 0;
};

/// Globally adaptive Gauss-Kronrod (7/15) quadrature: the interval with the
/// largest error estimate is bisected until the total estimate drops below
/// max(rel_tol * |value|, abs_tol).
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double rel_tol = 1e-10, double abs_tol = 1e-15,
                           int max_intervals = 200000);

}  // namespace bhlab
