// SPDX-License-Identifier: Apache-2.0
#pragma once

// Order-generating function families, exact order checks on small discrete
// measures, and statistical order tests on sample sets.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ordlab/sample_view.hpp"

namespace ordlab::orders {

// The seven function classes inducing the integral stochastic orders:
// nondecreasing (ST), convex (CX), directionally convex (DCX), supermodular
// (SM) and their increasing intersections ICX, IDCX, ISM.
enum class FunctionClass { ST, CX, DCX, SM, ICX, IDCX, ISM };

const char* to_string(FunctionClass c);
std::optional<FunctionClass> function_class_from_string(const std::string& tag);

bool is_increasing_class(FunctionClass c);

enum class TestFunctionKind { HINGE, ABS_HINGE, LINEAR, ORTHANT_INDICATOR, HINGE_PRODUCT };

// One scalar-valued test function on R^d. All kinds are pure evaluations:
//   HINGE              max(theta.x - a, 0)
//   ABS_HINGE          |theta.x - a|
//   LINEAR             sign * theta.x
//   ORTHANT_INDICATOR  prod_i 1{x_i > a_i}
//   HINGE_PRODUCT      prod_i max(x_i - a_i, 0)
class TestFunction {
 public:
  static TestFunction hinge(std::vector<double> theta, double anchor);
  static TestFunction abs_hinge(std::vector<double> theta, double anchor);
  static TestFunction linear(std::vector<double> theta, int sign);
  static TestFunction orthant_indicator(std::vector<double> anchor);
  static TestFunction hinge_product(std::vector<double> anchor);

  double operator()(std::span<const double> x) const;

  [[nodiscard]] TestFunctionKind kind() const { return kind_; }
  [[nodiscard]] int dim() const { return static_cast<int>(vec_.size()); }
  [[nodiscard]] std::string kind_name() const;
  [[nodiscard]] std::string params() const;

  std::string id;  // assigned by generate_family

 private:
  TestFunctionKind kind_;
  std::vector<double> vec_;  // theta for HINGE/ABS_HINGE/LINEAR, anchors otherwise
  double anchor_ = 0.0;
  int sign_ = 1;
};

// Finite measure with nonnegative atom weights. Zero-weight atoms are
// rejected at construction.
class DiscreteMeasure {
 public:
  DiscreteMeasure() = default;
  DiscreteMeasure(std::vector<std::vector<double>> points, std::vector<double> weights);

  // 1-d convenience: {(x, w), ...}
  static DiscreteMeasure points_1d(const std::vector<std::pair<double, double>>& atoms);

  [[nodiscard]] std::size_t size() const { return weights_.size(); }
  [[nodiscard]] int dim() const;
  [[nodiscard]] double mass() const;
  [[nodiscard]] std::vector<double> mean() const;  // mass-weighted, not normalized by mass
  [[nodiscard]] const std::vector<double>& point(std::size_t i) const { return points_[i]; }
  [[nodiscard]] double weight(std::size_t i) const { return weights_[i]; }

  // atoms sorted by coordinate, duplicates merged; d = 1 only
  [[nodiscard]] DiscreteMeasure sorted_1d() const;

 private:
  std::vector<std::vector<double>> points_;
  std::vector<double> weights_;
};

enum class Verdict { CONSISTENT, VIOLATION, INCONCLUSIVE };
const char* to_string(Verdict v);

struct FunctionResult {
  std::string id;
  std::string kind;
  std::string params;
  double diff = 0.0;     // mean f(Y) - mean f(X)
  double stderr_ = 0.0;  // standard error of diff
  double p = 1.0;        // one-sided p-value for the alternative diff < 0
};

struct OrderingReport {
  std::vector<FunctionResult> per_function;
  Verdict verdict = Verdict::INCONCLUSIVE;
  std::size_t family_size = 0;
  double alpha = 0.0;
  double eps_tol = -1.0;  // negative: per-function 1e-3 * pooled sd of f-values
  std::string correction = "bonferroni";
  std::string family_class;

  [[nodiscard]] std::string to_csv() const;
  [[nodiscard]] std::string to_json() const;
};

// Finite generator family for the requested class. Anchors sit on the
// empirical 5%-95% quantiles of sample_hint when given, else on a fixed
// symmetric grid in [-3,3] per axis; directions come from a fixed
// deterministic unit-sphere grid (nonnegative orthant only for the
// increasing classes). The family is a finite subset of the class, so in
// d > 1 the induced tests are necessary conditions, not characterizations.
std::vector<TestFunction> generate_family(FunctionClass cls, int dim, int anchors_per_axis,
                                          std::optional<SampleView> sample_hint = std::nullopt);

// sum_i w_i max(x_i - a, 0); nonincreasing convex piecewise-linear in a.
double stop_loss(const DiscreteMeasure& m, double a);

// Exact one-dimensional order between equal-mass discrete measures.
//   ICX: stop-loss dominance at every atom of either measure
//   CX:  ICX plus equal means
//   ST:  distribution-function dominance at every atom
//   DCX: coincides with CX on the line
//   SM:  every function on R is supermodular, so only equality qualifies
// Throws std::invalid_argument when the masses differ.
bool exact_order_check_1d(const DiscreteMeasure& m1, const DiscreteMeasure& m2,
                          FunctionClass cls);

// Exact componentwise-order check in any dimension: true iff a coupling
// supported on {(x,y): x <= y componentwise} exists, decided by max-flow
// feasibility on the bipartite support graph. Combined support capped at
// 200 atoms.
bool exact_st_check_multid(const DiscreteMeasure& m1, const DiscreteMeasure& m2);

// Statistical order test of X <=_F Y on two i.i.d. sample sets. One-sided
// Z-test per family member with Bonferroni correction at level alpha:
//   VIOLATION   some corrected p-value (alt. "diff < 0") is below alpha
//   CONSISTENT  every diff clears -eps_tol at the corrected noise allowance,
//               i.e. diff >= -(eps_tol + z_crit * stderr)
//   INCONCLUSIVE only for degenerate (non-finite) inputs
// eps_tol < 0 requests the default 1e-3 * pooled standard deviation of the
// function values.
OrderingReport empirical_order_test(SampleView samples_x, SampleView samples_y,
                                    const std::vector<TestFunction>& family, double alpha,
                                    double eps_tol = -1.0);

struct CutResult {
  bool single_crossing = false;
  std::optional<double> crossing;
};

// Single-crossing test for two Levy distribution functions evaluated on a
// grid: true iff F1bar - F2bar changes sign at most once, from <= 0 to >= 0.
// Returns the leftmost admissible crossing point.
CutResult cut_criterion_1d(const std::function<double(double)>& f1bar,
                           const std::function<double(double)>& f2bar,
                           std::span<const double> grid);

// True iff d1/d2 is nonincreasing along the grid (relative slack 1e-10).
// Grid must be strictly increasing with at least 50 points; both densities
// must be strictly positive on it.
bool likelihood_ratio_monotone(const std::function<double(double)>& d1,
                               const std::function<double(double)>& d2,
                               std::span<const double> grid);

// Finite-difference membership probes used by the generator self-tests and
// the propagation checks: midpoint inequality for convexity, coordinate
// increments for monotonicity, rectangle inequality for supermodularity,
// mixed second differences for directional convexity.
bool class_member_fd(const std::function<double(std::span<const double>)>& f, FunctionClass cls,
                     int dim, std::uint64_t probe_seed, int probes = 100, double tol = 1e-9);

}  // namespace ordlab::orders
