#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "levelset/errors.hpp"

namespace levelset {

// Adaptive Gauss-Kronrod integration with an absolute tolerance contract.
// Throws QuadratureFailure when the error estimate does not meet it.
template <typename F>
double integrate(F&& f, double a, double b, double abs_tol, int max_depth = 15) {
  if (a >= b) return 0.0;
  double err = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      f, a, b, max_depth, 1e-14, &err);
  if (!(err <= abs_tol) && !(err <= 1e-12 * std::abs(v) + abs_tol)) {
    throw QuadratureFailure("error estimate " + std::to_string(err) +
                            " above tolerance " + std::to_string(abs_tol));
  }
  return v;
}

}  // namespace levelset
