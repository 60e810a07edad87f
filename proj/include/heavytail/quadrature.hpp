#pragma once

#include <functional>
#include <limits>
#include <span>

namespace heavytail::quadrature {

struct QuadratureConfig {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  int max_subdivisions = 2000;

  // Throws ParameterOutOfRange on non-positive tolerances or subdivisions.
  void validate() const;
};

struct IntegralResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int subdivisions_used = 0;
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

using Integrand = std::function<double(double)>;

// Global adaptive Gauss-Kronrod (10/21 point) integration of f over
// [lower, upper]. An infinite upper limit is handled by x = lower + u/(1-u).
// `breakpoints` seed the initial partition; points outside the open interval
// are ignored. Throws NonConvergence when max_subdivisions is exhausted.
IntegralResult integrate_adaptive(const Integrand& f, double lower, double upper,
                                  const QuadratureConfig& cfg = {},
                                  std::span<const double> breakpoints = {});

}  // namespace heavytail::quadrature
