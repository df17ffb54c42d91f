// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>

namespace ordlab {

struct QuadratureOptions {
  double rel_tol = 1e-8;
  double abs_floor = 1e-14;  // intervals contributing less than this are accepted
  int max_depth = 60;
};

// Adaptive integration of f over the finite interval [a, b]: recursive
// bisection with a 15-point Gauss-Kronrod rule, using the embedded 7-point
// Gauss value for the error estimate. Throws numerical_error when the depth
// cap is hit before the tolerance is met.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& opt = {});

// Integral over [a, +inf), via the rational map x = a + u/(1-u).
double integrate_right_tail(const std::function<double(double)>& f, double a,
                            const QuadratureOptions& opt = {});

// Integral over (-inf, b].
double integrate_left_tail(const std::function<double(double)>& f, double b,
                           const QuadratureOptions& opt = {});

// Bracketing + bisection for a monotone objective. Expands the initial
// bracket geometrically; throws no_solution_error when no sign change is
// found, numerical_error on stagnation. max_iter counts bisection steps.
double bisect_monotone(const std::function<double(double)>& g, double lo, double hi,
                       double target, double tol, int max_iter = 200);

}  // namespace ordlab
