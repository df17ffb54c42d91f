// SPDX-License-Identifier: Apache-2.0
#include "ordlab/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "ordlab/errors.hpp"
#include "ordlab/quadrature.hpp"
#include "ordlab/special.hpp"

namespace ordlab::samplers {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string digest_tag(const std::string& s) {
  // FNV-1a 64 over the spec description string
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// Factor Sigma = A A^T through the symmetric eigendecomposition, clipping
// tiny negative eigenvalues; rejects anything below -1e-8.
Eigen::MatrixXd psd_factor(const Eigen::MatrixXd& sigma) {
  if (sigma.rows() != sigma.cols()) throw std::invalid_argument("psd_factor: non-square matrix");
  if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > 1e-10) {
    throw std::invalid_argument("psd_factor: matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma);
  Eigen::VectorXd ev = es.eigenvalues();
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  for (int i = 0; i < ev.size(); ++i) {
    if (ev[i] < -1e-8 * scale) {
      throw std::invalid_argument("psd_factor: matrix is not positive semidefinite");
    }
    ev[i] = ev[i] > 1e-10 ? std::sqrt(ev[i]) : 0.0;
  }
  return es.eigenvectors() * ev.asDiagonal();
}

}  // namespace

// ---------------------------------------------------------------------------
// JumpLaw

struct JumpLaw::Impl {
  enum class Kind { ATOMIC, UNIFORM, TABLE } kind = Kind::ATOMIC;
  int dim = 1;

  // atomic: points sorted by first coordinate, cumulative weights
  std::vector<std::vector<double>> points;
  std::vector<double> cum;

  // uniform
  double lo = 0.0, hi = 1.0;

  // table: piecewise-linear inverse CDF over nodes x with cumulative c
  std::vector<double> xs;
  std::vector<double> cs;
  double zero_atom_prob = 0.0;  // probability lump at 0 (inserted after neg branch)
  double zero_lo = 0.0;         // cumulative level where the zero lump starts

  double mean = 0.0;
  double second = 0.0;

  double icdf(double u) const;
  void draw(RngEngine& eng, std::span<double> out) const;
};

double JumpLaw::Impl::icdf(double u) const {
  switch (kind) {
    case Kind::ATOMIC: {
      const auto it = std::lower_bound(cum.begin(), cum.end(), u);
      const std::size_t idx = std::min<std::size_t>(it - cum.begin(), points.size() - 1);
      return points[idx][0];
    }
    case Kind::UNIFORM:
      return lo + (hi - lo) * u;
    case Kind::TABLE: {
      if (zero_atom_prob > 0.0 && u >= zero_lo && u < zero_lo + zero_atom_prob) return 0.0;
      const double v = (zero_atom_prob > 0.0 && u >= zero_lo + zero_atom_prob)
                           ? u - zero_atom_prob
                           : u;
      const auto it = std::upper_bound(cs.begin(), cs.end(), v);
      std::size_t j = std::min<std::size_t>(std::max<std::ptrdiff_t>(it - cs.begin(), 1),
                                            cs.size() - 1);
      const double c0 = cs[j - 1], c1 = cs[j];
      const double w = c1 > c0 ? (v - c0) / (c1 - c0) : 0.5;
      return xs[j - 1] + w * (xs[j] - xs[j - 1]);
    }
  }
  return 0.0;
}

void JumpLaw::Impl::draw(RngEngine& eng, std::span<double> out) const {
  if (kind == Kind::ATOMIC && dim > 1) {
    const double u = eng.uniform01();
    const auto it = std::lower_bound(cum.begin(), cum.end(), u);
    const std::size_t idx = std::min<std::size_t>(it - cum.begin(), points.size() - 1);
    for (int k = 0; k < dim; ++k) out[k] = points[idx][k];
    return;
  }
  out[0] = icdf(eng.uniform01());
}

JumpLaw JumpLaw::atomic(orders::DiscreteMeasure m) {
  const double mass = m.mass();
  if (std::fabs(mass - 1.0) > 1e-12) {
    throw std::invalid_argument("JumpLaw::atomic: mass must equal 1");
  }
  auto impl = std::make_shared<Impl>();
  impl->kind = Impl::Kind::ATOMIC;
  impl->dim = m.dim() == 0 ? 1 : m.dim();
  std::vector<std::size_t> order(m.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&m](std::size_t a, std::size_t b) { return m.point(a) < m.point(b); });
  double acc = 0.0;
  for (std::size_t i : order) {
    impl->points.push_back(m.point(i));
    acc += m.weight(i);
    impl->cum.push_back(acc);
    if (impl->dim == 1) {
      impl->mean += m.weight(i) * m.point(i)[0];
      impl->second += m.weight(i) * m.point(i)[0] * m.point(i)[0];
    }
  }
  impl->cum.back() = 1.0;
  JumpLaw law;
  law.impl_ = impl;
  return law;
}

JumpLaw JumpLaw::uniform(double lo, double hi) {
  if (!(lo < hi)) throw std::invalid_argument("JumpLaw::uniform: need lo < hi");
  auto impl = std::make_shared<Impl>();
  impl->kind = Impl::Kind::UNIFORM;
  impl->lo = lo;
  impl->hi = hi;
  impl->mean = 0.5 * (lo + hi);
  impl->second = (hi * hi * hi - lo * lo * lo) / (3.0 * (hi - lo));
  JumpLaw law;
  law.impl_ = impl;
  return law;
}

namespace {

// cumulative table over [lo, hi] for a positive density; nodes equally
// spaced, 2048 segments
void build_table(const std::function<double(double)>& f, double lo, double hi,
                 std::vector<double>* xs, std::vector<double>* cs) {
  const int segments = 2048;
  xs->resize(segments + 1);
  cs->resize(segments + 1);
  QuadratureOptions opt;
  opt.rel_tol = 1e-10;
  double acc = 0.0;
  (*xs)[0] = lo;
  (*cs)[0] = 0.0;
  for (int j = 1; j <= segments; ++j) {
    const double a = lo + (hi - lo) * (j - 1) / segments;
    const double b = lo + (hi - lo) * j / segments;
    acc += integrate(f, a, b, opt);
    (*xs)[j] = b;
    (*cs)[j] = acc;
  }
  const double total = acc;
  if (!(total > 0.0)) throw std::invalid_argument("JumpLaw density integrates to zero");
  for (double& c : *cs) c /= total;
  cs->back() = 1.0;
}

// geometric node spacing toward the truncation boundary, where the Levy
// density peaks
std::vector<double> geometric_nodes(double boundary, double far, int count) {
  // |far - boundary| spanned by nodes clustering at the boundary
  const double span = far - boundary;
  const double s_min = std::fabs(boundary) * 1e-6 + 1e-12;
  const double ratio = std::log1p(std::fabs(span) / s_min);
  std::vector<double> nodes(count + 1);
  for (int j = 0; j <= count; ++j) {
    const double w = ratio * j / count;
    nodes[j] = boundary + (span > 0 ? 1.0 : -1.0) * s_min * std::expm1(w);
  }
  nodes[0] = boundary;
  nodes[count] = far;
  return nodes;
}

}  // namespace

JumpLaw JumpLaw::density(std::function<double(double)> f, double lo, double hi) {
  if (!(lo < hi)) throw std::invalid_argument("JumpLaw::density: need lo < hi");
  auto impl = std::make_shared<Impl>();
  impl->kind = Impl::Kind::TABLE;
  build_table(f, lo, hi, &impl->xs, &impl->cs);
  QuadratureOptions opt;
  opt.rel_tol = 1e-10;
  const double mass = integrate(f, lo, hi, opt);
  impl->mean = integrate([&f](double x) { return x * f(x); }, lo, hi, opt) / mass;
  impl->second = integrate([&f](double x) { return x * x * f(x); }, lo, hi, opt) / mass;
  JumpLaw law;
  law.impl_ = impl;
  return law;
}

JumpLaw JumpLaw::truncated_levy(const levy::TruncatedLevyMeasure& fn) {
  const double total = fn.total_mass();
  if (!(total > 0.0)) throw std::invalid_argument("JumpLaw::truncated_levy: zero total mass");
  if (fn.dim() != 1) {
    // d-dimensional atomic measures normalize directly
    if (fn.parent().is_density()) {
      throw std::invalid_argument("JumpLaw::truncated_levy: density form must be 1-d");
    }
  }
  const auto& parent = fn.parent();
  if (!parent.is_density()) {
    std::vector<std::vector<double>> pts;
    std::vector<double> w;
    const auto& atoms = parent.atoms();
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      bool inside = true;
      for (double c : atoms.point(i)) {
        if (!(c > fn.eps_low() && c < fn.eps_up())) inside = false;
      }
      if (inside) continue;
      pts.push_back(atoms.point(i));
      w.push_back(atoms.weight(i) / total);
    }
    if (fn.zero_atom_weight() > 0.0) {
      pts.push_back(std::vector<double>(atoms.size() ? atoms.dim() : 1, 0.0));
      w.push_back(fn.zero_atom_weight() / total);
    }
    // bypass the unit-mass check roundoff by renormalizing the last weight
    double acc = 0.0;
    for (double x : w) acc += x;
    w.back() += 1.0 - acc;
    return JumpLaw::atomic(orders::DiscreteMeasure(std::move(pts), std::move(w)));
  }

  const auto& g = parent.density_fn();
  auto impl = std::make_shared<Impl>();
  impl->kind = Impl::Kind::TABLE;
  impl->dim = 1;
  const double neg_mass = fn.neg_tail_mass();
  const double pos_mass = fn.tail_mass() - neg_mass;
  QuadratureOptions opt;
  opt.rel_tol = 1e-9;

  // locate far boundaries holding all but 1e-12 of each side's mass
  auto far_point = [&](double boundary, int sign) {
    double dist = std::max(1.0, std::fabs(boundary));
    const double side_mass = sign > 0 ? pos_mass : neg_mass;
    for (int k = 0; k < 60; ++k) {
      const double x = boundary + sign * dist;
      const double beyond = sign > 0 ? integrate_right_tail(g, x, opt)
                                     : integrate_left_tail(g, x, opt);
      if (beyond < 1e-12 * side_mass) return x;
      dist *= 2.0;
    }
    return boundary + sign * dist;
  };

  std::vector<double> xs, cs;
  double acc = 0.0;
  if (neg_mass > 0.0) {
    const double far = far_point(fn.eps_low(), -1);
    auto nodes = geometric_nodes(fn.eps_low(), far, 1024);  // from boundary toward -inf
    std::reverse(nodes.begin(), nodes.end());               // ascending
    xs.push_back(nodes[0]);
    cs.push_back(0.0);
    for (std::size_t j = 1; j < nodes.size(); ++j) {
      acc += integrate(g, nodes[j - 1], nodes[j], opt);
      xs.push_back(nodes[j]);
      cs.push_back(acc);
    }
  }
  impl->zero_lo = acc / total;
  impl->zero_atom_prob = fn.zero_atom_weight() / total;
  if (pos_mass > 0.0) {
    const double far = far_point(fn.eps_up(), +1);
    auto nodes = geometric_nodes(fn.eps_up(), far, 1024);
    if (!xs.empty()) {
      // keep the table strictly increasing across the excluded window
      xs.push_back(fn.eps_up());
      cs.push_back(acc);
    } else {
      xs.push_back(nodes[0]);
      cs.push_back(0.0);
    }
    for (std::size_t j = 1; j < nodes.size(); ++j) {
      acc += integrate(g, nodes[j - 1], nodes[j], opt);
      xs.push_back(nodes[j]);
      cs.push_back(acc);
    }
  }
  const double tail_total = acc;
  for (double& c : cs) c = c / total * (fn.tail_mass() / tail_total);
  cs.back() = (total - fn.zero_atom_weight()) / total;
  impl->xs = std::move(xs);
  impl->cs = std::move(cs);
  impl->mean = first_moment(fn) / total;
  impl->second = 0.0;  // not used for truncated laws
  JumpLaw law;
  law.impl_ = impl;
  return law;
}

int JumpLaw::dim() const { return impl_->dim; }
bool JumpLaw::is_atomic() const { return impl_->kind == Impl::Kind::ATOMIC; }

double JumpLaw::inverse_cdf(double u) const {
  if (impl_->dim != 1) throw std::invalid_argument("JumpLaw::inverse_cdf: law is not 1-d");
  return impl_->icdf(u);
}

void JumpLaw::sample(RngEngine& eng, std::span<double> out) const { impl_->draw(eng, out); }

double JumpLaw::sample_1d(RngEngine& eng) const {
  if (impl_->dim != 1) throw std::invalid_argument("JumpLaw::sample_1d: law is not 1-d");
  return impl_->icdf(eng.uniform01());
}

double JumpLaw::mean_1d() const { return impl_->mean; }
double JumpLaw::second_moment_1d() const { return impl_->second; }

// ---------------------------------------------------------------------------
// parameter records

GIGParams::GIGParams(double lam, double del, double gam) : lambda(lam), delta(del), gamma(gam) {
  if (!(gamma > 0.0) || delta < 0.0) {
    throw std::invalid_argument("GIGParams: need delta >= 0, gamma > 0");
  }
  if (delta == 0.0 && lambda <= 0.0) {
    throw std::invalid_argument("GIGParams: delta = 0 requires lambda > 0");
  }
}

GHParams::GHParams(int dim, double lam, double a, Eigen::VectorXd b, double del, Eigen::VectorXd m,
                   Eigen::MatrixXd D)
    : d(dim), lambda(lam), alpha(a), beta(std::move(b)), delta(del), mu(std::move(m)),
      Delta(std::move(D)) {
  if (d < 1 || beta.size() != d || mu.size() != d || Delta.rows() != d || Delta.cols() != d) {
    throw std::invalid_argument("GHParams: dimension mismatch");
  }
  if (!(alpha > 0.0) || delta < 0.0) {
    throw std::invalid_argument("GHParams: need alpha > 0, delta >= 0");
  }
  if (std::fabs(Delta.determinant() - 1.0) > 1e-8) {
    throw std::invalid_argument("GHParams: det(Delta) must equal 1");
  }
  const double q = beta.transpose() * Delta * beta;
  if (!(alpha * alpha > q)) {
    throw std::invalid_argument("GHParams: need alpha^2 > beta' Delta beta");
  }
}

double GHParams::gamma() const {
  const double q = beta.transpose() * Delta * beta;
  return std::sqrt(alpha * alpha - q);
}

// ---------------------------------------------------------------------------
// multivariate normal

SampleMatrix sample_mvn(const Eigen::VectorXd& mu, const Eigen::MatrixXd& sigma, std::size_t n,
                        RngStream rng, int threads) {
  const auto d = static_cast<std::size_t>(mu.size());
  const Eigen::MatrixXd a = psd_factor(sigma);

  SampleMatrix out;
  out.n = n;
  out.d = d;
  out.data.resize(n * d);
  std::ostringstream tag;
  tag << "mvn;d=" << d << ";mu=" << mu.transpose() << ";sigma=" << sigma.reshaped().transpose();
  out.provenance = {rng.master_seed, rng.stream_index, digest_tag(tag.str())};

  parallel_for(n, threads, [&](std::size_t i) {
    RngEngine eng(rng.child(i));
    Eigen::VectorXd z(static_cast<Eigen::Index>(d));
    for (std::size_t k = 0; k < d; ++k) z[static_cast<Eigen::Index>(k)] = eng.normal();
    const Eigen::VectorXd row = mu + a * z;
    for (std::size_t k = 0; k < d; ++k) out.at(i, k) = row[static_cast<Eigen::Index>(k)];
  });
  return out;
}

// ---------------------------------------------------------------------------
// coupled compound Poisson

CoupledPaths sample_compound_poisson_coupled(const CompoundPoissonSpec& spec1,
                                             const CompoundPoissonSpec& spec2,
                                             std::span<const double> t_grid, std::size_t n,
                                             Coupling coupling, RngStream rng, int threads) {
  if (std::fabs(spec1.intensity - spec2.intensity) > 1e-12) {
    throw std::invalid_argument("coupled compound Poisson: intensities must agree");
  }
  if (!(spec1.intensity > 0.0)) throw std::invalid_argument("compound Poisson: intensity must be > 0");
  if (t_grid.empty()) throw std::invalid_argument("compound Poisson: empty time grid");
  for (std::size_t j = 1; j < t_grid.size(); ++j) {
    if (!(t_grid[j] > t_grid[j - 1])) {
      throw std::invalid_argument("compound Poisson: time grid must be increasing");
    }
  }
  const int d = spec1.dim();
  if (spec2.dim() != d || spec1.jumps.dim() != d || spec2.jumps.dim() != d) {
    throw std::invalid_argument("compound Poisson: dimension mismatch");
  }
  if (coupling == Coupling::SHARED_CLOCK_COMONOTONE && d != 1) {
    throw std::invalid_argument("comonotone coupling is unsupported for d > 1");
  }

  const std::size_t m = t_grid.size();
  CoupledPaths out;
  out.t_grid.assign(t_grid.begin(), t_grid.end());
  out.jump_counts.assign(n, 0);
  for (SampleMatrix* pm : {&out.paths1, &out.paths2}) {
    pm->n = n;
    pm->d = m * static_cast<std::size_t>(d);
    pm->data.resize(n * pm->d);
  }
  out.paths1.provenance = {rng.master_seed, rng.stream_index, digest_tag("cpc;p1")};
  out.paths2.provenance = {rng.master_seed, rng.stream_index, digest_tag("cpc;p2")};

  const double lambda = spec1.intensity;
  const double horizon = t_grid.back();

  parallel_for(n, threads, [&](std::size_t i) {
    RngEngine eng(rng.child(i));
    std::vector<double> sum1(d, 0.0), sum2(d, 0.0);
    std::vector<double> j1(d), j2(d);
    std::size_t grid_pos = 0;
    std::int64_t count = 0;
    auto record_until = [&](double t_now) {
      while (grid_pos < m && t_grid[grid_pos] < t_now) {
        for (int k = 0; k < d; ++k) {
          out.paths1.at(i, grid_pos * d + k) = sum1[k] + spec1.drift0[k] * t_grid[grid_pos];
          out.paths2.at(i, grid_pos * d + k) = sum2[k] + spec2.drift0[k] * t_grid[grid_pos];
        }
        ++grid_pos;
      }
    };
    double t = eng.exponential(lambda);
    while (t <= horizon) {
      record_until(t);
      if (coupling == Coupling::SHARED_CLOCK_COMONOTONE) {
        const double u = eng.uniform01();
        j1[0] = spec1.jumps.inverse_cdf(u);
        j2[0] = spec2.jumps.inverse_cdf(u);
      } else {
        spec1.jumps.sample(eng, j1);
        spec2.jumps.sample(eng, j2);
      }
      for (int k = 0; k < d; ++k) {
        sum1[k] += j1[k];
        sum2[k] += j2[k];
      }
      ++count;
      t += eng.exponential(lambda);
    }
    record_until(horizon + 1.0);  // flush remaining grid times
    out.jump_counts[i] = count;
  });
  return out;
}

namespace {

SampleMatrix take_time_slice(const SampleMatrix& paths, std::size_t m, std::size_t slice) {
  const std::size_t d = paths.d / m;
  SampleMatrix out;
  out.n = paths.n;
  out.d = d;
  out.data.resize(out.n * d);
  out.provenance = paths.provenance;
  for (std::size_t i = 0; i < paths.n; ++i) {
    for (std::size_t k = 0; k < d; ++k) out.at(i, k) = paths.at(i, slice * d + k);
  }
  return out;
}

}  // namespace

SampleMatrix CoupledPaths::terminal1() const {
  return take_time_slice(paths1, t_grid.size(), t_grid.size() - 1);
}
SampleMatrix CoupledPaths::terminal2() const {
  return take_time_slice(paths2, t_grid.size(), t_grid.size() - 1);
}

// ---------------------------------------------------------------------------
// truncated Levy terminal law

SampleMatrix sample_levy_truncated(const levy::LevyTriplet& triplet,
                                   const levy::TruncatedLevyMeasure& fn, double t, std::size_t n,
                                   RngStream rng, int threads) {
  if (!(t > 0.0)) throw std::invalid_argument("sample_levy_truncated: need t > 0");
  const int d = triplet.dim();
  const double total = fn.total_mass();
  if (!std::isfinite(total)) {
    throw std::invalid_argument("sample_levy_truncated: measure mass must be finite");
  }
  const bool has_jumps = total > 0.0;
  JumpLaw law = has_jumps ? JumpLaw::truncated_levy(fn) : JumpLaw::uniform(0.0, 1.0);
  if (has_jumps && law.dim() != d) {
    throw std::invalid_argument("sample_levy_truncated: jump dimension mismatch");
  }
  const Eigen::MatrixXd a = psd_factor(triplet.sigma) * std::sqrt(t);

  // id-truncation drift convention: E S_t = drift * t, so the compound
  // Poisson part is compensated by its own first moment
  Eigen::VectorXd b0 = triplet.drift;
  if (has_jumps && d == 1) b0[0] -= first_moment(fn);

  SampleMatrix out;
  out.n = n;
  out.d = static_cast<std::size_t>(d);
  out.data.resize(out.n * out.d);
  out.provenance = {rng.master_seed, rng.stream_index, digest_tag("levy_trunc")};

  parallel_for(n, threads, [&](std::size_t i) {
    RngEngine eng(rng.child(i));
    Eigen::VectorXd z(d);
    for (int k = 0; k < d; ++k) z[k] = eng.normal();
    Eigen::VectorXd val = b0 * t + a * z;
    if (has_jumps) {
      const std::int64_t count = eng.poisson(total * t);
      std::vector<double> jump(d);
      for (std::int64_t c = 0; c < count; ++c) {
        law.sample(eng, jump);
        for (int k = 0; k < d; ++k) val[k] += jump[k];
      }
    }
    for (int k = 0; k < d; ++k) out.at(i, static_cast<std::size_t>(k)) = val[k];
  });
  return out;
}

// ---------------------------------------------------------------------------
// GIG / GH / NIG

namespace {

// unnormalized GIG density x^(lambda-1) exp(-(delta^2/x + gamma^2 x)/2)
double gig_kernel(const GIGParams& p, double x) {
  if (!(x > 0.0)) return 0.0;
  return std::pow(x, p.lambda - 1.0) *
         std::exp(-0.5 * (p.delta * p.delta / x + p.gamma * p.gamma * x));
}

// closed-form normalization 1 / ((gamma/delta)^lambda / (2 K_lambda(delta gamma)))
double gig_closed_form_integral(const GIGParams& p) {
  if (p.delta == 0.0) {
    // Gamma(lambda, rate gamma^2/2) limit
    return std::tgamma(p.lambda) / std::pow(0.5 * p.gamma * p.gamma, p.lambda);
  }
  return 2.0 * bessel_k(p.lambda, p.delta * p.gamma) / std::pow(p.gamma / p.delta, p.lambda);
}

struct GigTable {
  std::vector<double> xs;
  std::vector<double> cs;  // normalized CDF at xs
  double norm = 1.0;       // integral of the kernel
};

// mode of the GIG density, used to anchor the support search
double gig_mode(const GIGParams& p) {
  const double lm1 = p.lambda - 1.0;
  const double g2 = p.gamma * p.gamma;
  const double d2 = p.delta * p.delta;
  return (lm1 + std::sqrt(lm1 * lm1 + d2 * g2)) / g2;
}

GigTable build_gig_table(const GIGParams& p) {
  QuadratureOptions opt;
  opt.rel_tol = 1e-9;
  auto kern = [&p](double x) { return gig_kernel(p, x); };

  const double mode = std::max(gig_mode(p), 1e-12);
  // expand to quantile bounds holding all but ~1e-12 of the mass
  double lo = mode, hi = mode;
  const double fmode = gig_kernel(p, mode);
  while (lo > 1e-300 && gig_kernel(p, lo) > fmode * 1e-16) lo *= 0.5;
  while (gig_kernel(p, hi) > fmode * 1e-16 && hi < 1e300) hi *= 2.0;

  GigTable table;
  const int segments = 4096;
  table.xs.resize(segments + 1);
  table.cs.resize(segments + 1);
  // log-spaced nodes resolve both the x->0 spike and the exponential tail
  const double llo = std::log(lo), lhi = std::log(hi);
  double acc = 0.0;
  table.xs[0] = lo;
  table.cs[0] = 0.0;
  for (int j = 1; j <= segments; ++j) {
    const double a = std::exp(llo + (lhi - llo) * (j - 1) / segments);
    const double b = std::exp(llo + (lhi - llo) * j / segments);
    acc += integrate(kern, a, b, opt);
    table.xs[j] = b;
    table.cs[j] = acc;
  }
  table.norm = acc;

  // normalization self-check against the closed-form constant
  const double closed = gig_closed_form_integral(p);
  if (std::fabs(acc / closed - 1.0) > 1e-6) {
    std::ostringstream msg;
    msg << "GIG normalization self-check failed: quadrature " << acc << " vs closed form "
        << closed;
    throw numerical_error(msg.str());
  }
  for (double& c : table.cs) c /= acc;
  table.cs.back() = 1.0;
  return table;
}

double gig_table_icdf(const GigTable& t, const GIGParams& p, double u) {
  const auto it = std::upper_bound(t.cs.begin(), t.cs.end(), u);
  std::size_t j =
      std::min<std::size_t>(std::max<std::ptrdiff_t>(it - t.cs.begin(), 1), t.cs.size() - 1);
  const double c0 = t.cs[j - 1], c1 = t.cs[j];
  double x = t.xs[j - 1] + (c1 > c0 ? (u - c0) / (c1 - c0) : 0.5) * (t.xs[j] - t.xs[j - 1]);
  // two Newton corrections using the density and a local segment quadrature
  QuadratureOptions opt;
  opt.rel_tol = 1e-9;
  auto kern = [&p](double v) { return gig_kernel(p, v); };
  for (int it2 = 0; it2 < 2; ++it2) {
    const double cdf_x =
        t.cs[j - 1] + integrate(kern, t.xs[j - 1], x, opt) / t.norm;
    const double dens = gig_kernel(p, x) / t.norm;
    if (!(dens > 0.0)) break;
    const double step = (cdf_x - u) / dens;
    const double nx = x - step;
    if (nx <= t.xs[j - 1] || nx >= t.xs[j]) break;
    x = nx;
    if (std::fabs(step) < 1e-12 * std::max(1.0, x)) break;
  }
  return x;
}

// exact inverse Gaussian sampler (transformation with roots);
// GIG(-1/2, delta, gamma) == IG(mean delta/gamma, shape delta^2)
double sample_ig(RngEngine& eng, double mean, double shape) {
  const double v = eng.normal();
  const double y = v * v;
  const double x = mean + mean * mean * y / (2.0 * shape) -
                   mean / (2.0 * shape) * std::sqrt(4.0 * mean * shape * y + mean * mean * y * y);
  const double u = eng.uniform01();
  if (u <= mean / (mean + x)) return x;
  return mean * mean / x;
}

}  // namespace

double gig_cdf(const GIGParams& p, double x) {
  if (x <= 0.0) return 0.0;
  QuadratureOptions opt;
  opt.rel_tol = 1e-9;
  auto kern = [&p](double v) { return gig_kernel(p, v); };
  const double norm = gig_closed_form_integral(p);
  const double lo = 1e-300;
  // integrate from near zero; the kernel vanishes fast at 0 for delta > 0
  double lower = std::min(x, std::max(1e-14, gig_mode(p) * 1e-9));
  double mass = integrate(kern, lower, x, opt);
  // remaining sliver below `lower` is negligible for delta > 0; for the
  // gamma limit integrate it directly
  if (p.delta == 0.0 && lower > lo) mass += integrate(kern, lo, lower, opt);
  return std::min(1.0, mass / norm);
}

double gig_mean(const GIGParams& p) {
  QuadratureOptions opt;
  opt.rel_tol = 1e-9;
  auto kern = [&p](double v) { return gig_kernel(p, v); };
  const double norm = gig_closed_form_integral(p);
  const double mode = std::max(gig_mode(p), 1e-12);
  double lo = mode, hi = mode;
  const double fmode = gig_kernel(p, mode);
  while (lo > 1e-300 && gig_kernel(p, lo) > fmode * 1e-16) lo *= 0.5;
  while (gig_kernel(p, hi) * hi > fmode * 1e-16 && hi < 1e300) hi *= 2.0;
  return integrate([&kern](double v) { return v * kern(v); }, lo, hi, opt) / norm;
}

std::vector<double> sample_gig(const GIGParams& p, std::size_t n, RngStream rng, int threads) {
  std::vector<double> out(n);
  if (std::fabs(p.lambda + 0.5) < 1e-12 && p.delta > 0.0) {
    const double mean = p.delta / p.gamma;
    const double shape = p.delta * p.delta;
    parallel_for(n, threads, [&](std::size_t i) {
      RngEngine eng(rng.child(i));
      out[i] = sample_ig(eng, mean, shape);
    });
    return out;
  }
  const GigTable table = build_gig_table(p);
  parallel_for(n, threads, [&](std::size_t i) {
    RngEngine eng(rng.child(i));
    out[i] = gig_table_icdf(table, p, eng.uniform01());
  });
  return out;
}

SampleMatrix sample_gh(const GHParams& p, std::size_t n, RngStream rng, int threads) {
  const double gam = p.gamma();
  const GIGParams mix(p.lambda, p.delta, gam);
  const Eigen::MatrixXd a = psd_factor(p.Delta);
  const Eigen::VectorXd shift = p.Delta * p.beta;

  const bool ig_path = std::fabs(p.lambda + 0.5) < 1e-12 && p.delta > 0.0;
  GigTable table;
  if (!ig_path) table = build_gig_table(mix);

  SampleMatrix out;
  out.n = n;
  out.d = static_cast<std::size_t>(p.d);
  out.data.resize(out.n * out.d);
  std::ostringstream tag;
  tag << "gh;d=" << p.d << ";lambda=" << p.lambda << ";alpha=" << p.alpha << ";delta=" << p.delta;
  out.provenance = {rng.master_seed, rng.stream_index, digest_tag(tag.str())};

  parallel_for(n, threads, [&](std::size_t i) {
    RngEngine eng(rng.child(i));
    const double x = ig_path ? sample_ig(eng, p.delta / gam, p.delta * p.delta)
                             : gig_table_icdf(table, mix, eng.uniform01());
    Eigen::VectorXd z(p.d);
    for (int k = 0; k < p.d; ++k) z[k] = eng.normal();
    const Eigen::VectorXd row = p.mu + x * shift + std::sqrt(x) * (a * z);
    for (int k = 0; k < p.d; ++k) out.at(i, static_cast<std::size_t>(k)) = row[k];
  });
  return out;
}

SampleMatrix sample_nig_process(const GHParams& p, std::span<const double> t_grid, std::size_t n,
                                RngStream rng, int threads) {
  if (std::fabs(p.lambda + 0.5) > 1e-12) {
    throw std::invalid_argument("sample_nig_process: requires lambda = -1/2");
  }
  if (t_grid.empty()) throw std::invalid_argument("sample_nig_process: empty grid");
  for (std::size_t j = 0; j < t_grid.size(); ++j) {
    if (!(t_grid[j] > (j ? t_grid[j - 1] : 0.0))) {
      throw std::invalid_argument("sample_nig_process: grid must be increasing and positive");
    }
  }
  const double gam = p.gamma();
  const Eigen::MatrixXd a = psd_factor(p.Delta);
  const Eigen::VectorXd shift = p.Delta * p.beta;
  const std::size_t m = t_grid.size();

  SampleMatrix out;
  out.n = n;
  out.d = m * static_cast<std::size_t>(p.d);
  out.data.resize(out.n * out.d);
  out.provenance = {rng.master_seed, rng.stream_index, digest_tag("nig_process")};

  parallel_for(n, threads, [&](std::size_t i) {
    RngEngine eng(rng.child(i));
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(p.d);
    double t_prev = 0.0;
    Eigen::VectorXd z(p.d);
    for (std::size_t j = 0; j < m; ++j) {
      const double dt = t_grid[j] - t_prev;
      t_prev = t_grid[j];
      const double del = p.delta * dt;
      const double x = sample_ig(eng, del / gam, del * del);
      for (int k = 0; k < p.d; ++k) z[k] = eng.normal();
      acc += p.mu * dt + x * shift + std::sqrt(x) * (a * z);
      for (int k = 0; k < p.d; ++k) {
        out.at(i, j * static_cast<std::size_t>(p.d) + static_cast<std::size_t>(k)) = acc[k];
      }
    }
  });
  return out;
}

}  // namespace ordlab::samplers
