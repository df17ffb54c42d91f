// SPDX-License-Identifier: Apache-2.0
#pragma once

// Seeded, reproducible samplers: multivariate normal, coupled compound
// Poisson pairs, truncated-Levy terminal laws, GIG / GH / NIG mixtures.
// Identical (master_seed, stream_index, spec) always reproduce bit-identical
// output regardless of thread count: every path owns a derived sub-stream.

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ordlab/levy.hpp"
#include "ordlab/orders.hpp"
#include "ordlab/rng.hpp"
#include "ordlab/sample_view.hpp"

namespace ordlab::samplers {

struct Provenance {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_index = 0;
  std::string spec_digest;
};

// n row-major d-vectors plus provenance.
struct SampleMatrix {
  std::size_t n = 0;
  std::size_t d = 0;
  std::vector<double> data;  // n * d, row-major
  Provenance provenance;

  [[nodiscard]] SampleView view() const { return {data.data(), n, d}; }
  [[nodiscard]] double& at(std::size_t i, std::size_t j) { return data[i * d + j]; }
  [[nodiscard]] double at(std::size_t i, std::size_t j) const { return data[i * d + j]; }
};

// Normalized jump-size law for compound Poisson processes. Atomic laws and
// closed-form uniforms sample exactly; density laws go through a tabulated
// inverse CDF (2048 nodes per branch). All variants support the inverse-CDF
// map used by comonotone coupling when one-dimensional.
class JumpLaw {
 public:
  static JumpLaw atomic(orders::DiscreteMeasure m);  // mass must be 1 within 1e-12
  static JumpLaw uniform(double lo, double hi);
  static JumpLaw density(std::function<double(double)> f, double lo, double hi);
  // normalized truncated Levy measure, zero atom included
  static JumpLaw truncated_levy(const levy::TruncatedLevyMeasure& fn);

  [[nodiscard]] int dim() const;
  [[nodiscard]] bool is_atomic() const;
  // quantile transform; d = 1 only
  [[nodiscard]] double inverse_cdf(double u) const;
  void sample(RngEngine& eng, std::span<double> out) const;
  [[nodiscard]] double sample_1d(RngEngine& eng) const;

  // E X and E X^2 (atomic: exact sums; density: quadrature)
  [[nodiscard]] double mean_1d() const;
  [[nodiscard]] double second_moment_1d() const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

// Compound Poisson process under the 0-truncation drift convention:
// S_t = drift0 * t + sum of N_t i.i.d. jumps, N_t Poisson(intensity * t).
struct CompoundPoissonSpec {
  Eigen::VectorXd drift0;
  double intensity = 1.0;
  JumpLaw jumps;

  [[nodiscard]] int dim() const { return static_cast<int>(drift0.size()); }
};

struct GIGParams {
  double lambda = -0.5;
  double delta = 1.0;
  double gamma = 1.0;

  GIGParams(double lam, double del, double gam);
};

struct GHParams {
  int d = 1;
  double lambda = -0.5;
  double alpha = 1.0;
  Eigen::VectorXd beta;
  double delta = 1.0;
  Eigen::VectorXd mu;
  Eigen::MatrixXd Delta;  // symmetric positive definite, det = 1

  GHParams(int dim, double lam, double a, Eigen::VectorXd b, double del, Eigen::VectorXd m,
           Eigen::MatrixXd D);

  // sqrt(alpha^2 - beta' Delta beta), the GIG rate parameter of the mixture
  [[nodiscard]] double gamma() const;
};

// i.i.d. N(mu, Sigma) rows through a symmetric eigendecomposition factor;
// eigenvalues below the 1e-10 clip threshold are treated as zero, values
// below -1e-8 reject the matrix.
SampleMatrix sample_mvn(const Eigen::VectorXd& mu, const Eigen::MatrixXd& sigma, std::size_t n,
                        RngStream rng, int threads = 1);

enum class Coupling { SHARED_CLOCK, SHARED_CLOCK_COMONOTONE };

struct CoupledPaths {
  SampleMatrix paths1;  // n x (grid size * d)
  SampleMatrix paths2;
  std::vector<double> t_grid;
  std::vector<std::int64_t> jump_counts;  // shared clock: same for both processes

  [[nodiscard]] SampleMatrix terminal1() const;
  [[nodiscard]] SampleMatrix terminal2() const;
};

// Two compound Poisson processes driven by one Poisson clock per path.
// SHARED_CLOCK draws jump sizes independently from the two laws;
// SHARED_CLOCK_COMONOTONE (d = 1) pushes one uniform per jump through both
// inverse distribution functions. Intensities must agree to 1e-12.
CoupledPaths sample_compound_poisson_coupled(const CompoundPoissonSpec& spec1,
                                             const CompoundPoissonSpec& spec2,
                                             std::span<const double> t_grid, std::size_t n,
                                             Coupling coupling, RngStream rng, int threads = 1);

// Terminal values of the truncated-Levy approximation: drift compensated so
// that E S_t = triplet.drift * t, Gaussian part from triplet.sigma, jump part
// compound Poisson with intensity ||Fn|| and law Fn / ||Fn||.
SampleMatrix sample_levy_truncated(const levy::LevyTriplet& triplet,
                                   const levy::TruncatedLevyMeasure& fn, double t, std::size_t n,
                                   RngStream rng, int threads = 1);

// GIG(lambda, delta, gamma) draws. lambda = -1/2 uses the exact inverse
// Gaussian transformation-with-roots sampler; other lambda invert the
// quadrature CDF (tolerance 1e-9). The quadrature normalization is
// self-checked against the closed-form constant to 1e-6.
std::vector<double> sample_gig(const GIGParams& p, std::size_t n, RngStream rng, int threads = 1);

// GIG CDF by adaptive quadrature of the density (used by the generic-lambda
// sampler and as the distributional reference in tests).
double gig_cdf(const GIGParams& p, double x);
double gig_mean(const GIGParams& p);

// GH mixture rows mu + X Delta beta + sqrt(X) N, X ~ GIG(lambda, delta,
// gamma), N ~ N(0, Delta) independent.
SampleMatrix sample_gh(const GHParams& p, std::size_t n, RngStream rng, int threads = 1);

// NIG process paths (lambda = -1/2): independent NIG increments over the
// grid; by convolution stability the marginal at grid time t is
// NIG(d, alpha, beta, t delta, t mu, Delta). Output rows hold the path
// values time-major: (t_1 components..., t_2 components..., ...).
SampleMatrix sample_nig_process(const GHParams& p, std::span<const double> t_grid, std::size_t n,
                                RngStream rng, int threads = 1);

}  // namespace ordlab::samplers
