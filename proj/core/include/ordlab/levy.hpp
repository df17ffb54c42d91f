// SPDX-License-Identifier: Apache-2.0
#pragma once

// Levy measures and triplets, truncation with mass matching, the NIG Levy
// density, and pointwise domination criteria.

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <span>
#include <utility>

#include "ordlab/orders.hpp"
#include "ordlab/quadrature.hpp"

namespace ordlab::levy {

// Jump measure, either a density on R \ {0} or a finite atomic measure.
// Densities must integrate (x^2 ^ 1); that is verified by quadrature at
// construction unless the caller opts out. Total-mass infiniteness is a
// declared flag, not detected: divergence detection by quadrature is
// unreliable.
class LevyMeasure {
 public:
  static LevyMeasure density(std::function<double(double)> f, bool declared_infinite_mass,
                             bool validate = true);
  static LevyMeasure atomic(orders::DiscreteMeasure atoms);
  // measure with no jumps
  static LevyMeasure zero();

  [[nodiscard]] bool is_density() const { return static_cast<bool>(density_); }
  [[nodiscard]] bool infinite_mass() const { return infinite_mass_; }
  [[nodiscard]] const std::function<double(double)>& density_fn() const { return density_; }
  [[nodiscard]] const orders::DiscreteMeasure& atoms() const { return atoms_; }
  [[nodiscard]] int dim() const;

 private:
  std::function<double(double)> density_;  // empty when atomic
  orders::DiscreteMeasure atoms_;
  bool infinite_mass_ = false;
};

// Levy triplet (b, Sigma, F) under the identity truncation convention:
// for processes with a first moment, b = E S_1.
struct LevyTriplet {
  Eigen::VectorXd drift;
  Eigen::MatrixXd sigma;  // Gaussian covariance, symmetric psd
  LevyMeasure measure;

  LevyTriplet(Eigen::VectorXd b, Eigen::MatrixXd s, LevyMeasure f);
  [[nodiscard]] int dim() const { return static_cast<int>(drift.size()); }
};

// A Levy measure restricted to the complement of the window (eps_low,
// eps_up), possibly carrying an explicit atom at zero added by the
// mass-matching step.
class TruncatedLevyMeasure {
 public:
  TruncatedLevyMeasure() = default;

  [[nodiscard]] const LevyMeasure& parent() const { return parent_; }
  [[nodiscard]] double eps_low() const { return eps_low_; }
  [[nodiscard]] double eps_up() const { return eps_up_; }
  [[nodiscard]] double zero_atom_weight() const { return zero_atom_; }
  // mass excluding the zero atom
  [[nodiscard]] double tail_mass() const { return tail_mass_; }
  [[nodiscard]] double total_mass() const { return tail_mass_ + zero_atom_; }
  [[nodiscard]] double neg_tail_mass() const { return neg_mass_; }
  [[nodiscard]] int dim() const;

  [[nodiscard]] TruncatedLevyMeasure with_zero_atom(double weight) const;

 private:
  friend TruncatedLevyMeasure truncate(const LevyMeasure&, double, double);
  LevyMeasure parent_;
  double eps_low_ = -1.0;
  double eps_up_ = 1.0;
  double zero_atom_ = 0.0;
  double tail_mass_ = 0.0;
  double neg_mass_ = 0.0;
};

// Restriction of F to (eps_low, eps_up)^c. Quadrature masses carry relative
// accuracy 1e-8 for density measures.
TruncatedLevyMeasure truncate(const LevyMeasure& f, double eps_low, double eps_up);

// Mass matching: the lighter measure gains an atom at zero of weight
// |  ||F1n|| - ||F2n||  |, after which both totals agree.
std::pair<TruncatedLevyMeasure, TruncatedLevyMeasure> modify_pair(
    const TruncatedLevyMeasure& f1n, const TruncatedLevyMeasure& f2n);

// int x dFn over the truncated support (the zero atom contributes nothing);
// one-dimensional measures only.
double first_moment(const TruncatedLevyMeasure& fn);

// Finds eps_up > 0 with first_moment(truncate(f, eps_low, eps_up)) ==
// target_moment to 1e-8, by bracketing + bisection (<= 200 iterations).
// Requires the positive-side |x| integral of f to diverge near 0 so that the
// moment sweeps (neg_moment, +inf) as eps_up drops to 0.
double solve_truncation_levels(const LevyMeasure& f, double eps_low, double target_moment);

// Levy distribution function F_bar(x) = Fn((-inf, x]) of a one-dimensional
// truncated measure; nondecreasing, right-continuous at the atoms.
class LevyDistributionFunction {
 public:
  explicit LevyDistributionFunction(TruncatedLevyMeasure fn);
  double operator()(double x) const;

 private:
  TruncatedLevyMeasure fn_;
};

// delta * alpha * K1(alpha|x|) * e^(beta x) / (pi |x|); the Levy density of
// NIG(alpha, beta, delta, mu). Computed through the scaled Bessel K1, so it
// stays finite-in-floating-point out to very large |x|.
double nig_levy_density(double x, double alpha, double beta, double delta);

// NIG Levy measure as a density-form LevyMeasure (infinite total mass).
LevyMeasure make_nig_levy_measure(double alpha, double beta, double delta);

enum class DominationMode { GLOBAL, SIGN_SPLIT };

// GLOBAL: f1 <= f2 at every grid point. SIGN_SPLIT: f1 >= f2 on the negative
// points and f1 <= f2 on the positive ones. Relative slack 1e-12.
bool density_domination(const std::function<double(double)>& f1,
                        const std::function<double(double)>& f2, DominationMode mode,
                        std::span<const double> grid);

}  // namespace ordlab::levy
