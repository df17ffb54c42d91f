// SPDX-License-Identifier: Apache-2.0
#include "ordlab/levy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ordlab/errors.hpp"
#include "ordlab/special.hpp"

namespace ordlab::levy {

namespace {

constexpr double kMassRelTol = 1e-8;

QuadratureOptions mass_quad() {
  QuadratureOptions opt;
  opt.rel_tol = kMassRelTol;
  return opt;
}

}  // namespace

// ---------------------------------------------------------------------------
// LevyMeasure

LevyMeasure LevyMeasure::density(std::function<double(double)> f, bool declared_infinite_mass,
                                 bool validate) {
  if (!f) throw std::invalid_argument("LevyMeasure::density: empty function");
  LevyMeasure m;
  m.density_ = std::move(f);
  m.infinite_mass_ = declared_infinite_mass;
  if (validate) {
    // int (x^2 ^ 1) dF must be finite: x^2-weighted near zero, raw tails.
    QuadratureOptions opt;
    opt.rel_tol = 1e-6;
    const auto& g = m.density_;
    const double near = integrate([&g](double x) { return x * x * g(x); }, 1e-10, 1.0, opt) +
                        integrate([&g](double x) { return x * x * g(x); }, -1.0, -1e-10, opt);
    const double far = integrate_right_tail(g, 1.0, opt) +
                       integrate_left_tail(g, -1.0, opt);
    if (!std::isfinite(near) || !std::isfinite(far)) {
      throw std::invalid_argument("LevyMeasure::density: (x^2 ^ 1) integral is not finite");
    }
  }
  return m;
}

LevyMeasure LevyMeasure::atomic(orders::DiscreteMeasure atoms) {
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    bool all_zero = true;
    for (double c : atoms.point(i)) {
      if (c != 0.0) all_zero = false;
    }
    if (all_zero) throw std::invalid_argument("LevyMeasure::atomic: atom at the origin");
  }
  LevyMeasure m;
  m.atoms_ = std::move(atoms);
  return m;
}

LevyMeasure LevyMeasure::zero() { return LevyMeasure{}; }

int LevyMeasure::dim() const {
  if (is_density()) return 1;
  return atoms_.size() == 0 ? 1 : atoms_.dim();
}

// ---------------------------------------------------------------------------
// LevyTriplet

LevyTriplet::LevyTriplet(Eigen::VectorXd b, Eigen::MatrixXd s, LevyMeasure f)
    : drift(std::move(b)), sigma(std::move(s)), measure(std::move(f)) {
  if (sigma.rows() != sigma.cols() || sigma.rows() != drift.size()) {
    throw std::invalid_argument("LevyTriplet: dimension mismatch");
  }
  if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::invalid_argument("LevyTriplet: sigma is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma);
  if (es.eigenvalues().minCoeff() < -1e-10) {
    throw std::invalid_argument("LevyTriplet: sigma is not positive semidefinite");
  }
}

// ---------------------------------------------------------------------------
// truncation

int TruncatedLevyMeasure::dim() const { return parent_.dim(); }

TruncatedLevyMeasure TruncatedLevyMeasure::with_zero_atom(double weight) const {
  TruncatedLevyMeasure out = *this;
  out.zero_atom_ = weight;
  return out;
}

TruncatedLevyMeasure truncate(const LevyMeasure& f, double eps_low, double eps_up) {
  if (!(eps_low < 0.0) || !(eps_up > 0.0)) {
    throw std::invalid_argument("truncate: need eps_low < 0 < eps_up");
  }
  TruncatedLevyMeasure out;
  out.parent_ = f;
  out.eps_low_ = eps_low;
  out.eps_up_ = eps_up;
  out.zero_atom_ = 0.0;
  if (f.is_density()) {
    const auto& g = f.density_fn();
    out.neg_mass_ = integrate_left_tail(g, eps_low, mass_quad());
    out.tail_mass_ = out.neg_mass_ + integrate_right_tail(g, eps_up, mass_quad());
  } else {
    double total = 0.0, neg = 0.0;
    const auto& atoms = f.atoms();
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      const auto& p = atoms.point(i);
      bool inside = true;  // inside the open box (eps_low, eps_up)^d
      for (double c : p) {
        if (!(c > eps_low && c < eps_up)) inside = false;
      }
      if (inside) continue;
      total += atoms.weight(i);
      if (atoms.dim() == 1 && p[0] <= eps_low) neg += atoms.weight(i);
    }
    out.tail_mass_ = total;
    out.neg_mass_ = neg;
  }
  return out;
}

std::pair<TruncatedLevyMeasure, TruncatedLevyMeasure> modify_pair(
    const TruncatedLevyMeasure& f1n, const TruncatedLevyMeasure& f2n) {
  const double m1 = f1n.tail_mass() + f1n.zero_atom_weight();
  const double m2 = f2n.tail_mass() + f2n.zero_atom_weight();
  if (m1 < m2) {
    return {f1n.with_zero_atom(f1n.zero_atom_weight() + (m2 - m1)), f2n};
  }
  if (m2 < m1) {
    return {f1n, f2n.with_zero_atom(f2n.zero_atom_weight() + (m1 - m2))};
  }
  return {f1n, f2n};
}

double first_moment(const TruncatedLevyMeasure& fn) {
  if (fn.dim() != 1) throw std::invalid_argument("first_moment: measure must be one-dimensional");
  const auto& parent = fn.parent();
  if (parent.is_density()) {
    const auto& g = parent.density_fn();
    const double neg =
        integrate_left_tail([&g](double x) { return x * g(x); }, fn.eps_low(), mass_quad());
    const double pos =
        integrate_right_tail([&g](double x) { return x * g(x); }, fn.eps_up(), mass_quad());
    return neg + pos;
  }
  double s = 0.0;
  const auto& atoms = parent.atoms();
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const double x = atoms.point(i)[0];
    if (x > fn.eps_low() && x < fn.eps_up()) continue;
    s += x * atoms.weight(i);
  }
  return s;
}

double solve_truncation_levels(const LevyMeasure& f, double eps_low, double target_moment) {
  if (!(eps_low < 0.0)) throw std::invalid_argument("solve_truncation_levels: eps_low must be < 0");
  auto moment_at = [&](double eps_up) { return first_moment(truncate(f, eps_low, eps_up)); };
  // the moment is nonincreasing in eps_up; start near |eps_low| and let the
  // bracketing expand
  const double eps0 = std::min(1.0, -eps_low);
  const double eps_up = bisect_monotone(moment_at, 0.5 * eps0, 2.0 * eps0, target_moment, 1e-8, 200);
  return eps_up;
}

// ---------------------------------------------------------------------------
// distribution function

LevyDistributionFunction::LevyDistributionFunction(TruncatedLevyMeasure fn) : fn_(std::move(fn)) {
  if (fn_.dim() != 1) {
    throw std::invalid_argument("LevyDistributionFunction: measure must be one-dimensional");
  }
}

double LevyDistributionFunction::operator()(double x) const {
  const auto& parent = fn_.parent();
  const double el = fn_.eps_low(), eu = fn_.eps_up();
  if (parent.is_density()) {
    const auto& g = parent.density_fn();
    double v;
    if (x <= el) {
      v = integrate_left_tail(g, x, mass_quad());
    } else if (x < 0.0) {
      v = fn_.neg_tail_mass();
    } else if (x < eu) {
      v = fn_.neg_tail_mass() + fn_.zero_atom_weight();
    } else {
      v = fn_.neg_tail_mass() + fn_.zero_atom_weight() +
          integrate([&g](double t) { return g(t); }, eu, x, mass_quad());
    }
    return v;
  }
  double s = x >= 0.0 ? fn_.zero_atom_weight() : 0.0;
  const auto& atoms = parent.atoms();
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const double p = atoms.point(i)[0];
    if (p > el && p < eu) continue;
    if (p <= x) s += atoms.weight(i);
  }
  return s;
}

// ---------------------------------------------------------------------------
// NIG density and domination

double nig_levy_density(double x, double alpha, double beta, double delta) {
  if (x == 0.0) throw std::invalid_argument("nig_levy_density: pole at x = 0");
  if (!(alpha > 0.0) || !(delta > 0.0) || std::fabs(beta) > alpha) {
    throw std::invalid_argument("nig_levy_density: need alpha > 0, delta > 0, |beta| <= alpha");
  }
  const double ax = std::fabs(x);
  const double z = alpha * ax;
  // K1(z) e^{beta x} = k1e(z) e^{beta x - z}; the exponent is <= 0 whenever
  // |beta| <= alpha, so no overflow on either side
  return delta * alpha * bessel_k1_scaled(z) * std::exp(beta * x - z) / (3.14159265358979323846 * ax);
}

LevyMeasure make_nig_levy_measure(double alpha, double beta, double delta) {
  auto f = [alpha, beta, delta](double x) { return nig_levy_density(x, alpha, beta, delta); };
  // validated shape: x^2 * f is bounded near zero, tails decay exponentially
  return LevyMeasure::density(f, /*declared_infinite_mass=*/true, /*validate=*/false);
}

bool density_domination(const std::function<double(double)>& f1,
                        const std::function<double(double)>& f2, DominationMode mode,
                        std::span<const double> grid) {
  if (mode == DominationMode::SIGN_SPLIT) {
    bool has_neg = false, has_pos = false;
    for (double x : grid) {
      has_neg = has_neg || x < 0.0;
      has_pos = has_pos || x > 0.0;
    }
    if (!has_neg || !has_pos) {
      throw std::invalid_argument("density_domination: SIGN_SPLIT grid needs points of both signs");
    }
  }
  for (double x : grid) {
    const double a = f1(x);
    const double b = f2(x);
    const double slack = 1e-12 * std::max(std::fabs(a), std::fabs(b));
    if (mode == DominationMode::GLOBAL || x > 0.0) {
      if (a > b + slack) return false;
    } else if (x < 0.0) {
      if (a < b - slack) return false;
    }
  }
  return true;
}

}  // namespace ordlab::levy
