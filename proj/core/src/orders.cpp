// SPDX-License-Identifier: Apache-2.0
#include "ordlab/orders.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <queue>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "ordlab/errors.hpp"
#include "ordlab/rng.hpp"
#include "ordlab/special.hpp"

namespace ordlab::orders {

namespace {

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_vec(const std::vector<double>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v[i]);
    out += buf;
  }
  out += ']';
  return out;
}

}  // namespace

const char* to_string(FunctionClass c) {
  switch (c) {
    case FunctionClass::ST: return "st";
    case FunctionClass::CX: return "cx";
    case FunctionClass::DCX: return "dcx";
    case FunctionClass::SM: return "sm";
    case FunctionClass::ICX: return "icx";
    case FunctionClass::IDCX: return "idcx";
    case FunctionClass::ISM: return "ism";
  }
  return "?";
}

std::optional<FunctionClass> function_class_from_string(const std::string& tag) {
  static const std::map<std::string, FunctionClass> table = {
      {"st", FunctionClass::ST},   {"cx", FunctionClass::CX},     {"dcx", FunctionClass::DCX},
      {"sm", FunctionClass::SM},   {"icx", FunctionClass::ICX},   {"idcx", FunctionClass::IDCX},
      {"ism", FunctionClass::ISM},
  };
  auto it = table.find(tag);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

bool is_increasing_class(FunctionClass c) {
  return c == FunctionClass::ST || c == FunctionClass::ICX || c == FunctionClass::IDCX ||
         c == FunctionClass::ISM;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::CONSISTENT: return "CONSISTENT";
    case Verdict::VIOLATION: return "VIOLATION";
    case Verdict::INCONCLUSIVE: return "INCONCLUSIVE";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// TestFunction

TestFunction TestFunction::hinge(std::vector<double> theta, double anchor) {
  TestFunction f;
  f.kind_ = TestFunctionKind::HINGE;
  f.vec_ = std::move(theta);
  f.anchor_ = anchor;
  return f;
}

TestFunction TestFunction::abs_hinge(std::vector<double> theta, double anchor) {
  TestFunction f;
  f.kind_ = TestFunctionKind::ABS_HINGE;
  f.vec_ = std::move(theta);
  f.anchor_ = anchor;
  return f;
}

TestFunction TestFunction::linear(std::vector<double> theta, int sign) {
  TestFunction f;
  f.kind_ = TestFunctionKind::LINEAR;
  f.vec_ = std::move(theta);
  f.sign_ = sign >= 0 ? 1 : -1;
  return f;
}

TestFunction TestFunction::orthant_indicator(std::vector<double> anchor) {
  TestFunction f;
  f.kind_ = TestFunctionKind::ORTHANT_INDICATOR;
  f.vec_ = std::move(anchor);
  return f;
}

TestFunction TestFunction::hinge_product(std::vector<double> anchor) {
  TestFunction f;
  f.kind_ = TestFunctionKind::HINGE_PRODUCT;
  f.vec_ = std::move(anchor);
  return f;
}

double TestFunction::operator()(std::span<const double> x) const {
  switch (kind_) {
    case TestFunctionKind::HINGE:
    case TestFunctionKind::ABS_HINGE:
    case TestFunctionKind::LINEAR: {
      double dot = 0.0;
      for (std::size_t i = 0; i < vec_.size(); ++i) dot += vec_[i] * x[i];
      if (kind_ == TestFunctionKind::LINEAR) return sign_ * dot;
      const double v = dot - anchor_;
      return kind_ == TestFunctionKind::HINGE ? std::max(v, 0.0) : std::fabs(v);
    }
    case TestFunctionKind::ORTHANT_INDICATOR: {
      for (std::size_t i = 0; i < vec_.size(); ++i) {
        if (!(x[i] > vec_[i])) return 0.0;
      }
      return 1.0;
    }
    case TestFunctionKind::HINGE_PRODUCT: {
      double prod = 1.0;
      for (std::size_t i = 0; i < vec_.size(); ++i) {
        const double h = x[i] - vec_[i];
        if (h <= 0.0) return 0.0;
        prod *= h;
      }
      return prod;
    }
  }
  return 0.0;
}

std::string TestFunction::kind_name() const {
  switch (kind_) {
    case TestFunctionKind::HINGE: return "hinge";
    case TestFunctionKind::ABS_HINGE: return "abs_hinge";
    case TestFunctionKind::LINEAR: return "linear";
    case TestFunctionKind::ORTHANT_INDICATOR: return "orthant_indicator";
    case TestFunctionKind::HINGE_PRODUCT: return "hinge_product";
  }
  return "?";
}

std::string TestFunction::params() const {
  std::string out;
  switch (kind_) {
    case TestFunctionKind::HINGE:
    case TestFunctionKind::ABS_HINGE:
      out = "theta=" + fmt_vec(vec_) + ";a=" + fmt_double(anchor_);
      break;
    case TestFunctionKind::LINEAR:
      out = "theta=" + fmt_vec(vec_) + ";sign=" + std::to_string(sign_);
      break;
    case TestFunctionKind::ORTHANT_INDICATOR:
    case TestFunctionKind::HINGE_PRODUCT:
      out = "a=" + fmt_vec(vec_);
      break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// DiscreteMeasure

DiscreteMeasure::DiscreteMeasure(std::vector<std::vector<double>> points,
                                 std::vector<double> weights)
    : points_(std::move(points)), weights_(std::move(weights)) {
  if (points_.size() != weights_.size()) {
    throw std::invalid_argument("DiscreteMeasure: points/weights size mismatch");
  }
  const std::size_t d = points_.empty() ? 0 : points_.front().size();
  for (const auto& p : points_) {
    if (p.size() != d) throw std::invalid_argument("DiscreteMeasure: mixed dimensions");
  }
  for (double w : weights_) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("DiscreteMeasure: weights must be positive and finite");
    }
  }
}

DiscreteMeasure DiscreteMeasure::points_1d(const std::vector<std::pair<double, double>>& atoms) {
  std::vector<std::vector<double>> pts;
  std::vector<double> w;
  pts.reserve(atoms.size());
  w.reserve(atoms.size());
  for (const auto& [x, wt] : atoms) {
    pts.push_back({x});
    w.push_back(wt);
  }
  return DiscreteMeasure(std::move(pts), std::move(w));
}

int DiscreteMeasure::dim() const { return points_.empty() ? 0 : static_cast<int>(points_.front().size()); }

double DiscreteMeasure::mass() const {
  double m = 0.0;
  for (double w : weights_) m += w;
  return m;
}

std::vector<double> DiscreteMeasure::mean() const {
  std::vector<double> mu(static_cast<std::size_t>(std::max(dim(), 0)), 0.0);
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    for (std::size_t k = 0; k < mu.size(); ++k) mu[k] += weights_[i] * points_[i][k];
  }
  return mu;
}

DiscreteMeasure DiscreteMeasure::sorted_1d() const {
  if (dim() > 1) throw std::invalid_argument("sorted_1d: measure is not one-dimensional");
  std::vector<std::pair<double, double>> atoms;
  atoms.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) atoms.emplace_back(points_[i][0], weights_[i]);
  std::sort(atoms.begin(), atoms.end());
  std::vector<std::pair<double, double>> merged;
  for (const auto& a : atoms) {
    if (!merged.empty() && a.first == merged.back().first) {
      merged.back().second += a.second;
    } else {
      merged.push_back(a);
    }
  }
  return points_1d(merged);
}

// ---------------------------------------------------------------------------
// generate_family

namespace {

std::vector<double> linspace(double a, double b, int k) {
  if (k == 1) return {0.5 * (a + b)};
  std::vector<double> v(k);
  for (int i = 0; i < k; ++i) v[i] = a + (b - a) * i / (k - 1);
  return v;
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  const double pos = q * (static_cast<double>(sorted.size()) - 1.0);
  const auto lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

// anchors for a given projection of the hint (or the fixed grid without one);
// quantile levels run 5% .. 95%
std::vector<double> anchor_grid(int k, const std::vector<double>* projected) {
  if (projected == nullptr || projected->empty()) return linspace(-3.0, 3.0, k);
  std::vector<double> sorted = *projected;
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> out(k);
  for (int i = 0; i < k; ++i) {
    const double q = (k == 1) ? 0.5 : 0.05 + 0.90 * i / (k - 1);
    out[i] = quantile_sorted(sorted, q);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// fixed deterministic direction grid; nonnegative orthant first, then the
// negations when the class is not an increasing one
std::vector<std::vector<double>> direction_grid(int d, bool nonneg_only) {
  std::vector<std::vector<double>> dirs;
  if (d == 1) {
    dirs.push_back({1.0});
  } else {
    for (int i = 0; i < d; ++i) {
      std::vector<double> e(d, 0.0);
      e[i] = 1.0;
      dirs.push_back(std::move(e));
    }
    dirs.emplace_back(d, 1.0 / std::sqrt(static_cast<double>(d)));
    if (d >= 3) {
      for (int i = 0; i < d; ++i) {
        for (int j = i + 1; j < d; ++j) {
          std::vector<double> e(d, 0.0);
          e[i] = e[j] = 1.0 / std::sqrt(2.0);
          dirs.push_back(std::move(e));
        }
      }
    }
  }
  if (!nonneg_only) {
    const std::size_t base = dirs.size();
    for (std::size_t i = 0; i < base; ++i) {
      std::vector<double> neg = dirs[i];
      for (double& v : neg) v = -v;
      dirs.push_back(std::move(neg));
    }
  }
  return dirs;
}

std::vector<double> project_hint(const SampleView& hint, const std::vector<double>& theta) {
  std::vector<double> out(hint.n);
  for (std::size_t i = 0; i < hint.n; ++i) {
    double dot = 0.0;
    const auto row = hint.row(i);
    for (std::size_t k = 0; k < row.size(); ++k) dot += theta[k] * row[k];
    out[i] = dot;
  }
  return out;
}

std::vector<double> axis_hint(const SampleView& hint, int axis) {
  std::vector<double> out(hint.n);
  for (std::size_t i = 0; i < hint.n; ++i) out[i] = hint.row(i)[axis];
  return out;
}

// all d-dimensional anchor combinations from per-axis grids
void product_anchors(const std::vector<std::vector<double>>& per_axis,
                     std::vector<std::vector<double>>* out) {
  std::vector<std::size_t> idx(per_axis.size(), 0);
  for (;;) {
    std::vector<double> a(per_axis.size());
    for (std::size_t k = 0; k < per_axis.size(); ++k) a[k] = per_axis[k][idx[k]];
    out->push_back(std::move(a));
    std::size_t k = 0;
    while (k < per_axis.size() && ++idx[k] == per_axis[k].size()) idx[k++] = 0;
    if (k == per_axis.size()) break;
  }
}

}  // namespace

std::vector<TestFunction> generate_family(FunctionClass cls, int dim, int anchors_per_axis,
                                          std::optional<SampleView> sample_hint) {
  if (dim < 1) throw std::invalid_argument("generate_family: dim must be >= 1");
  if (anchors_per_axis < 1) throw std::invalid_argument("generate_family: anchors_per_axis must be >= 1");
  if (sample_hint && sample_hint->empty()) {
    throw std::invalid_argument("generate_family: empty sample hint");
  }

  // the one-dimensional directional classes collapse: dcx == cx, idcx == icx
  if (dim == 1 && cls == FunctionClass::DCX) cls = FunctionClass::CX;
  if (dim == 1 && cls == FunctionClass::IDCX) cls = FunctionClass::ICX;

  std::vector<TestFunction> family;

  auto anchors_for = [&](const std::vector<double>& theta) {
    if (!sample_hint) return anchor_grid(anchors_per_axis, nullptr);
    auto proj = project_hint(*sample_hint, theta);
    return anchor_grid(anchors_per_axis, &proj);
  };
  auto per_axis_grids = [&] {
    std::vector<std::vector<double>> grids(dim);
    for (int k = 0; k < dim; ++k) {
      if (!sample_hint) {
        grids[k] = anchor_grid(anchors_per_axis, nullptr);
      } else {
        auto vals = axis_hint(*sample_hint, k);
        grids[k] = anchor_grid(anchors_per_axis, &vals);
      }
    }
    return grids;
  };

  switch (cls) {
    case FunctionClass::ST:
    case FunctionClass::SM:
    case FunctionClass::ISM: {
      std::vector<std::vector<double>> anchors;
      product_anchors(per_axis_grids(), &anchors);
      for (auto& a : anchors) family.push_back(TestFunction::orthant_indicator(std::move(a)));
      break;
    }
    case FunctionClass::ICX: {
      for (const auto& theta : direction_grid(dim, true)) {
        for (double a : anchors_for(theta)) family.push_back(TestFunction::hinge(theta, a));
        family.push_back(TestFunction::linear(theta, +1));
      }
      break;
    }
    case FunctionClass::CX: {
      const auto nonneg = direction_grid(dim, true);
      for (const auto& theta : direction_grid(dim, false)) {
        for (double a : anchors_for(theta)) family.push_back(TestFunction::hinge(theta, a));
        family.push_back(TestFunction::linear(theta, +1));
      }
      for (const auto& theta : nonneg) {
        for (double a : anchors_for(theta)) family.push_back(TestFunction::abs_hinge(theta, a));
      }
      break;
    }
    case FunctionClass::DCX: {
      for (const auto& theta : direction_grid(dim, true)) {
        for (double a : anchors_for(theta)) {
          family.push_back(TestFunction::hinge(theta, a));
          family.push_back(TestFunction::abs_hinge(theta, a));
        }
        family.push_back(TestFunction::linear(theta, +1));
        family.push_back(TestFunction::linear(theta, -1));
      }
      std::vector<std::vector<double>> anchors;
      product_anchors(per_axis_grids(), &anchors);
      for (auto& a : anchors) family.push_back(TestFunction::hinge_product(std::move(a)));
      break;
    }
    case FunctionClass::IDCX: {
      for (const auto& theta : direction_grid(dim, true)) {
        for (double a : anchors_for(theta)) family.push_back(TestFunction::hinge(theta, a));
        family.push_back(TestFunction::linear(theta, +1));
      }
      std::vector<std::vector<double>> anchors;
      product_anchors(per_axis_grids(), &anchors);
      for (auto& a : anchors) family.push_back(TestFunction::hinge_product(std::move(a)));
      break;
    }
  }

  for (std::size_t i = 0; i < family.size(); ++i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "f%03zu", i);
    family[i].id = buf;
  }
  return family;
}

// ---------------------------------------------------------------------------
// exact checks

double stop_loss(const DiscreteMeasure& m, double a) {
  if (m.dim() > 1) throw std::invalid_argument("stop_loss: measure must be one-dimensional");
  double s = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    s += m.weight(i) * std::max(m.point(i)[0] - a, 0.0);
  }
  return s;
}

namespace {

constexpr double kExactTol = 1e-9;

bool masses_equal(const DiscreteMeasure& m1, const DiscreteMeasure& m2) {
  const double a = m1.mass(), b = m2.mass();
  return std::fabs(a - b) <= 1e-12 * std::max({1.0, a, b});
}

// candidate evaluation points: all atom locations of both measures
std::vector<double> merged_atom_grid(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  std::vector<double> xs;
  xs.reserve(a.size() + b.size());
  for (std::size_t i = 0; i < a.size(); ++i) xs.push_back(a.point(i)[0]);
  for (std::size_t i = 0; i < b.size(); ++i) xs.push_back(b.point(i)[0]);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

double cdf_at(const DiscreteMeasure& m, double x) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m.point(i)[0] <= x) s += m.weight(i);
  }
  return s;
}

bool measures_equal_1d(const DiscreteMeasure& m1, const DiscreteMeasure& m2) {
  const auto a = m1.sorted_1d();
  const auto b = m2.sorted_1d();
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::fabs(a.point(i)[0] - b.point(i)[0]) > kExactTol) return false;
    if (std::fabs(a.weight(i) - b.weight(i)) > kExactTol) return false;
  }
  return true;
}

}  // namespace

bool exact_order_check_1d(const DiscreteMeasure& m1, const DiscreteMeasure& m2,
                          FunctionClass cls) {
  if (m1.dim() > 1 || m2.dim() > 1) {
    throw std::invalid_argument("exact_order_check_1d: measures must be one-dimensional");
  }
  if (!masses_equal(m1, m2)) {
    throw std::invalid_argument("exact_order_check_1d: total masses differ");
  }
  if (cls == FunctionClass::DCX) cls = FunctionClass::CX;    // classes coincide on the line
  if (cls == FunctionClass::IDCX) cls = FunctionClass::ICX;
  if (cls == FunctionClass::SM) {
    // every function on R is supermodular: f and -f both qualify, forcing equality
    return measures_equal_1d(m1, m2);
  }
  if (cls == FunctionClass::ISM) cls = FunctionClass::ST;  // increasing part is what remains

  const auto grid = merged_atom_grid(m1, m2);
  const double scale = std::max(1.0, std::max(m1.mass(), m2.mass()));

  if (cls == FunctionClass::ST) {
    for (double x : grid) {
      if (cdf_at(m1, x) < cdf_at(m2, x) - kExactTol * scale) return false;
    }
    return true;
  }

  // ICX: stop-loss dominance at every kink; the transforms are piecewise
  // linear with kinks only at atoms, so the grid is exhaustive.
  for (double x : grid) {
    if (stop_loss(m1, x) > stop_loss(m2, x) + kExactTol * scale) return false;
  }
  if (cls == FunctionClass::ICX) return true;

  // CX adds equal means
  const double mu1 = m1.mean()[0];
  const double mu2 = m2.mean()[0];
  return std::fabs(mu1 - mu2) <= kExactTol * std::max(1.0, std::fabs(mu1) + std::fabs(mu2));
}

// ---------------------------------------------------------------------------
// Strassen feasibility via max-flow (Dinic)

namespace {

struct FlowEdge {
  int to;
  double cap;
  int rev;
};

class Dinic {
 public:
  explicit Dinic(int n) : graph_(n), level_(n), iter_(n) {}

  void add_edge(int from, int to, double cap) {
    graph_[from].push_back({to, cap, static_cast<int>(graph_[to].size())});
    graph_[to].push_back({from, 0.0, static_cast<int>(graph_[from].size()) - 1});
  }

  double max_flow(int s, int t, double eps) {
    double flow = 0.0;
    while (bfs(s, t, eps)) {
      std::fill(iter_.begin(), iter_.end(), 0);
      for (;;) {
        const double f = dfs(s, t, std::numeric_limits<double>::infinity(), eps);
        if (f <= eps) break;
        flow += f;
      }
    }
    return flow;
  }

 private:
  bool bfs(int s, int t, double eps) {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<int> q;
    level_[s] = 0;
    q.push(s);
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      for (const auto& e : graph_[v]) {
        if (e.cap > eps && level_[e.to] < 0) {
          level_[e.to] = level_[v] + 1;
          q.push(e.to);
        }
      }
    }
    return level_[t] >= 0;
  }

  double dfs(int v, int t, double f, double eps) {
    if (v == t) return f;
    for (int& i = iter_[v]; i < static_cast<int>(graph_[v].size()); ++i) {
      FlowEdge& e = graph_[v][i];
      if (e.cap > eps && level_[v] < level_[e.to]) {
        const double d = dfs(e.to, t, std::min(f, e.cap), eps);
        if (d > eps) {
          e.cap -= d;
          graph_[e.to][e.rev].cap += d;
          return d;
        }
      }
    }
    return 0.0;
  }

  std::vector<std::vector<FlowEdge>> graph_;
  std::vector<int> level_;
  std::vector<int> iter_;
};

}  // namespace

bool exact_st_check_multid(const DiscreteMeasure& m1, const DiscreteMeasure& m2) {
  if (m1.dim() != m2.dim()) {
    throw std::invalid_argument("exact_st_check_multid: dimension mismatch");
  }
  if (m1.size() + m2.size() > 200) {
    throw resource_limit_error("exact_st_check_multid: combined support exceeds 200 atoms");
  }
  if (!masses_equal(m1, m2)) {
    throw std::invalid_argument("exact_st_check_multid: total masses differ");
  }
  const int n1 = static_cast<int>(m1.size());
  const int n2 = static_cast<int>(m2.size());
  const int source = 0, sink = n1 + n2 + 1;
  Dinic dinic(n1 + n2 + 2);
  const double total = m1.mass();
  for (int i = 0; i < n1; ++i) dinic.add_edge(source, 1 + i, m1.weight(i));
  for (int j = 0; j < n2; ++j) dinic.add_edge(1 + n1 + j, sink, m2.weight(j));
  for (int i = 0; i < n1; ++i) {
    const auto& x = m1.point(i);
    for (int j = 0; j < n2; ++j) {
      const auto& y = m2.point(j);
      bool leq = true;
      for (std::size_t k = 0; k < x.size(); ++k) {
        if (x[k] > y[k] + 1e-12) {
          leq = false;
          break;
        }
      }
      if (leq) dinic.add_edge(1 + i, 1 + n1 + j, total);
    }
  }
  const double eps = 1e-13 * std::max(total, 1.0);
  const double flow = dinic.max_flow(source, sink, eps);
  return flow >= total - 1e-9 * std::max(total, 1.0);
}

// ---------------------------------------------------------------------------
// empirical order test

OrderingReport empirical_order_test(SampleView samples_x, SampleView samples_y,
                                    const std::vector<TestFunction>& family, double alpha,
                                    double eps_tol) {
  if (samples_x.empty() || samples_y.empty()) {
    throw std::invalid_argument("empirical_order_test: empty sample set");
  }
  if (family.empty()) throw std::invalid_argument("empirical_order_test: empty family");
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("empirical_order_test: alpha must lie in (0,1)");
  }
  if (samples_x.d != samples_y.d) {
    throw std::invalid_argument("empirical_order_test: sample dimensions differ");
  }

  const std::size_t K = family.size();
  const double z_crit = normal_icdf(1.0 - alpha / static_cast<double>(K));

  OrderingReport report;
  report.family_size = K;
  report.alpha = alpha;
  report.eps_tol = eps_tol;

  bool any_violation = false;
  bool all_consistent = true;
  bool degenerate = false;

  for (const auto& f : family) {
    double sx = 0.0, sxx = 0.0, sy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < samples_x.n; ++i) {
      const double v = f(samples_x.row(i));
      sx += v;
      sxx += v * v;
    }
    for (std::size_t i = 0; i < samples_y.n; ++i) {
      const double v = f(samples_y.row(i));
      sy += v;
      syy += v * v;
    }
    const double nx = static_cast<double>(samples_x.n);
    const double ny = static_cast<double>(samples_y.n);
    const double mx = sx / nx;
    const double my = sy / ny;
    const double vx = samples_x.n > 1 ? std::max(0.0, (sxx - nx * mx * mx) / (nx - 1.0)) : 0.0;
    const double vy = samples_y.n > 1 ? std::max(0.0, (syy - ny * my * my) / (ny - 1.0)) : 0.0;
    const double diff = my - mx;
    const double se = std::sqrt(vx / nx + vy / ny);

    double p;
    if (se > 0.0) {
      p = normal_cdf(diff / se);
    } else {
      p = diff < 0.0 ? 0.0 : (diff > 0.0 ? 1.0 : 0.5);
    }

    FunctionResult row;
    row.id = f.id;
    row.kind = f.kind_name();
    row.params = f.params();
    row.diff = diff;
    row.stderr_ = se;
    row.p = p;
    report.per_function.push_back(row);

    if (!std::isfinite(diff) || !std::isfinite(se)) {
      degenerate = true;
      continue;
    }
    const double corrected = std::min(1.0, p * static_cast<double>(K));
    if (corrected < alpha) any_violation = true;

    // pooled sd of the f-values when the caller leaves eps_tol to default
    double eps = eps_tol;
    if (eps < 0.0) {
      const double pooled_var =
          ((nx - 1.0) * vx + (ny - 1.0) * vy) / std::max(1.0, nx + ny - 2.0);
      eps = 1e-3 * std::sqrt(std::max(pooled_var, 0.0));
    }
    if (diff < -(eps + z_crit * se)) all_consistent = false;
  }

  if (degenerate) {
    report.verdict = Verdict::INCONCLUSIVE;
  } else if (any_violation) {
    report.verdict = Verdict::VIOLATION;
  } else if (all_consistent) {
    report.verdict = Verdict::CONSISTENT;
  } else {
    report.verdict = Verdict::INCONCLUSIVE;
  }
  return report;
}

std::string OrderingReport::to_csv() const {
  std::string out = "id,kind,params,diff,stderr,p\n";
  for (const auto& r : per_function) {
    out += r.id;
    out += ',';
    out += r.kind;
    out += ',';
    out += r.params;
    out += ',';
    out += fmt_double(r.diff);
    out += ',';
    out += fmt_double(r.stderr_);
    out += ',';
    out += fmt_double(r.p);
    out += '\n';
  }
  return out;
}

std::string OrderingReport::to_json() const {
  nlohmann::json j;
  j["verdict"] = to_string(verdict);
  j["family_size"] = family_size;
  j["alpha"] = alpha;
  j["eps_tol"] = eps_tol;
  j["correction"] = correction;
  if (!family_class.empty()) j["class"] = family_class;
  auto rows = nlohmann::json::array();
  for (const auto& r : per_function) {
    rows.push_back({{"id", r.id},
                    {"kind", r.kind},
                    {"params", r.params},
                    {"diff", r.diff},
                    {"stderr", r.stderr_},
                    {"p", r.p}});
  }
  j["per_function"] = rows;
  return j.dump(2);
}

// ---------------------------------------------------------------------------
// cut criterion & likelihood ratio

CutResult cut_criterion_1d(const std::function<double(double)>& f1bar,
                           const std::function<double(double)>& f2bar,
                           std::span<const double> grid) {
  if (grid.size() < 2) throw std::invalid_argument("cut_criterion_1d: grid needs >= 2 points");
  const std::size_t n = grid.size();
  std::vector<double> diff(n);
  double scale = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = f1bar(grid[i]);
    const double b = f2bar(grid[i]);
    diff[i] = a - b;
    scale = std::max({scale, std::fabs(a), std::fabs(b)});
  }
  const double tol = 1e-10 * scale;

  // prefix_ok[k]: diff <= tol for all grid points up to k
  // suffix_ok[k]: diff >= -tol for all grid points from k on
  std::vector<char> prefix_ok(n), suffix_ok(n);
  bool ok = true;
  for (std::size_t i = 0; i < n; ++i) {
    ok = ok && diff[i] <= tol;
    prefix_ok[i] = ok;
  }
  ok = true;
  for (std::size_t i = n; i-- > 0;) {
    ok = ok && diff[i] >= -tol;
    suffix_ok[i] = ok;
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (prefix_ok[k] && suffix_ok[k]) return {true, grid[k]};
  }
  // the crossing may land between two grid points: - on the left, + on the right
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (prefix_ok[k] && suffix_ok[k + 1]) return {true, 0.5 * (grid[k] + grid[k + 1])};
  }
  return {false, std::nullopt};
}

bool likelihood_ratio_monotone(const std::function<double(double)>& d1,
                               const std::function<double(double)>& d2,
                               std::span<const double> grid) {
  if (grid.size() < 50) {
    throw std::invalid_argument("likelihood_ratio_monotone: grid needs >= 50 points");
  }
  double prev_ratio = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw std::invalid_argument("likelihood_ratio_monotone: grid must be strictly increasing");
    }
    const double a = d1(grid[i]);
    const double b = d2(grid[i]);
    if (!(a > 0.0) || !(b > 0.0)) {
      throw std::invalid_argument("likelihood_ratio_monotone: densities must be positive on grid");
    }
    const double r = a / b;
    if (i > 0 && r > prev_ratio * (1.0 + 1e-10)) return false;
    prev_ratio = r;
  }
  return true;
}

// ---------------------------------------------------------------------------
// finite-difference membership probes

namespace {

using Fn = std::function<double(std::span<const double>)>;

std::vector<double> random_point(RngEngine& eng, int dim, double lo, double hi) {
  std::vector<double> x(dim);
  for (auto& v : x) v = lo + (hi - lo) * eng.uniform01();
  return x;
}

bool probe_increasing(const Fn& f, int dim, RngEngine& eng, int probes, double tol) {
  for (int t = 0; t < probes; ++t) {
    auto x = random_point(eng, dim, -4.0, 4.0);
    const double fx = f(x);
    const double step = 0.25 + 1.5 * eng.uniform01();
    for (int i = 0; i < dim; ++i) {
      auto y = x;
      y[i] += step;
      if (f(y) < fx - tol) return false;
    }
  }
  return true;
}

bool probe_convex(const Fn& f, int dim, RngEngine& eng, int probes, double tol) {
  for (int t = 0; t < probes; ++t) {
    auto x = random_point(eng, dim, -4.0, 4.0);
    auto y = random_point(eng, dim, -4.0, 4.0);
    std::vector<double> mid(dim);
    for (int i = 0; i < dim; ++i) mid[i] = 0.5 * (x[i] + y[i]);
    if (f(mid) > 0.5 * (f(x) + f(y)) + tol) return false;
  }
  return true;
}

bool probe_supermodular(const Fn& f, int dim, RngEngine& eng, int probes, double tol) {
  if (dim == 1) return true;  // vacuous on the line
  for (int t = 0; t < probes; ++t) {
    auto x = random_point(eng, dim, -4.0, 4.0);
    auto y = random_point(eng, dim, -4.0, 4.0);
    std::vector<double> lo(dim), hi(dim);
    for (int i = 0; i < dim; ++i) {
      lo[i] = std::min(x[i], y[i]);
      hi[i] = std::max(x[i], y[i]);
    }
    if (f(hi) + f(lo) < f(x) + f(y) - tol) return false;
  }
  return true;
}

// nonnegative mixed second differences over all coordinate pairs (i == j
// covers coordinatewise convexity)
bool probe_dcx(const Fn& f, int dim, RngEngine& eng, int probes, double tol) {
  for (int t = 0; t < probes; ++t) {
    auto x = random_point(eng, dim, -4.0, 4.0);
    const double e1 = 0.25 + 1.25 * eng.uniform01();
    const double e2 = 0.25 + 1.25 * eng.uniform01();
    for (int i = 0; i < dim; ++i) {
      for (int j = i; j < dim; ++j) {
        auto xi = x, xj = x, xij = x;
        xi[i] += e1;
        xj[j] += e2;
        xij[i] += e1;
        xij[j] += e2;
        if (f(xij) - f(xi) - f(xj) + f(x) < -tol) return false;
      }
    }
  }
  return true;
}

}  // namespace

bool class_member_fd(const std::function<double(std::span<const double>)>& f, FunctionClass cls,
                     int dim, std::uint64_t probe_seed, int probes, double tol) {
  RngEngine eng(RngStream{probe_seed, 0x70726F6265ULL});
  switch (cls) {
    case FunctionClass::ST:
      return probe_increasing(f, dim, eng, probes, tol);
    case FunctionClass::CX:
      return probe_convex(f, dim, eng, probes, tol);
    case FunctionClass::ICX:
      return probe_convex(f, dim, eng, probes, tol) && probe_increasing(f, dim, eng, probes, tol);
    case FunctionClass::DCX:
      return probe_dcx(f, dim, eng, probes, tol);
    case FunctionClass::IDCX:
      return probe_dcx(f, dim, eng, probes, tol) && probe_increasing(f, dim, eng, probes, tol);
    case FunctionClass::SM:
      return probe_supermodular(f, dim, eng, probes, tol);
    case FunctionClass::ISM:
      return probe_supermodular(f, dim, eng, probes, tol) &&
             probe_increasing(f, dim, eng, probes, tol);
  }
  return false;
}

}  // namespace ordlab::orders
