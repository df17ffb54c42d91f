// SPDX-License-Identifier: Apache-2.0
#include "ordlab/quadrature.hpp"

#include <cmath>
#include <sstream>

#include "ordlab/errors.hpp"

namespace ordlab {

namespace {

// 15-point Kronrod nodes/weights with the embedded 7-point Gauss rule
// (QUADPACK dqk15 constants).
constexpr double kXgk[8] = {0.991455371120813, 0.949107912342759, 0.864864423359769,
                            0.741531185599394, 0.586087235467691, 0.405845151377397,
                            0.207784955007898, 0.000000000000000};
constexpr double kWgk[8] = {0.022935322010529, 0.063092092629979, 0.104790010322250,
                            0.140653259715525, 0.169004726639267, 0.190350578064785,
                            0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {0.129484966168870, 0.279705391489277, 0.381830050505119,
                           0.417959183673469};

struct RuleResult {
  double kronrod;
  double err;
};

RuleResult gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kron = kWgk[7] * fc;
  double gauss = kWg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double fsum = f(c - dx) + f(c + dx);
    kron += kWgk[j] * fsum;
    if (j % 2 == 1) gauss += kWg[j / 2] * fsum;
  }
  kron *= h;
  gauss *= h;
  return {kron, std::fabs(kron - gauss)};
}

double integrate_rec(const std::function<double(double)>& f, double a, double b,
                     const QuadratureOptions& opt, int depth) {
  const RuleResult r = gk15(f, a, b);
  if (r.err <= opt.abs_floor || r.err <= opt.rel_tol * std::fabs(r.kronrod)) {
    return r.kronrod;
  }
  if (depth >= opt.max_depth) {
    std::ostringstream msg;
    msg << "adaptive quadrature stalled on [" << a << ", " << b << "] at depth " << depth
        << ", local error estimate " << r.err;
    throw numerical_error(msg.str());
  }
  const double mid = 0.5 * (a + b);
  return integrate_rec(f, a, mid, opt, depth + 1) + integrate_rec(f, mid, b, opt, depth + 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& opt) {
  if (a == b) return 0.0;
  if (a > b) return -integrate(f, b, a, opt);
  return integrate_rec(f, a, b, opt, 0);
}

double integrate_right_tail(const std::function<double(double)>& f, double a,
                            const QuadratureOptions& opt) {
  // x = a + u/(1-u), dx = du/(1-u)^2, u in [0,1)
  auto g = [&f, a](double u) {
    const double om = 1.0 - u;
    const double x = a + u / om;
    return f(x) / (om * om);
  };
  return integrate(g, 0.0, 1.0 - 1e-14, opt);
}

double integrate_left_tail(const std::function<double(double)>& f, double b,
                           const QuadratureOptions& opt) {
  // mirror: int_{-inf}^b f = int_b^inf f(2b - x)
  return integrate_right_tail([&f, b](double x) { return f(2.0 * b - x); }, b, opt);
}

double bisect_monotone(const std::function<double(double)>& g, double lo, double hi, double target,
                       double tol, int max_iter) {
  double glo = g(lo);
  double ghi = g(hi);
  // expand the bracket geometrically until the target is enclosed
  for (int i = 0; i < 64 && (glo - target) * (ghi - target) > 0.0; ++i) {
    if (std::fabs(glo - target) < std::fabs(ghi - target)) {
      lo = std::max(lo * 0.5, 1e-300);
      glo = g(lo);
    } else {
      hi *= 2.0;
      if (!(hi < 1e12)) break;
      ghi = g(hi);
    }
  }
  if ((glo - target) * (ghi - target) > 0.0) {
    throw no_solution_error("bisect_monotone: target not bracketed");
  }
  double mid = lo;
  for (int i = 0; i < max_iter; ++i) {
    mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if (std::fabs(gm - target) <= tol) return mid;
    if ((gm - target) * (glo - target) > 0.0) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-300) break;
  }
  const double resid = std::fabs(g(mid) - target);
  if (resid > tol) {
    std::ostringstream msg;
    msg << "bisect_monotone: stagnated at residual " << resid << " (tol " << tol << ")";
    throw numerical_error(msg.str());
  }
  return mid;
}

}  // namespace ordlab
