#include "lsm/submodular.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

#include "lsm/errors.hpp"

namespace lsm {

BinaryVector vector_from_mask(std::uint32_t mask, int dim) {
  if (dim < 0 || dim > 32) throw std::invalid_argument("mask dim out of range");
  BinaryVector x(static_cast<std::size_t>(dim));
  for (int d = 0; d < dim; ++d) x[d] = (mask >> d) & 1u;
  return x;
}

std::uint32_t mask_from_vector(const BinaryVector& x) {
  if (x.size() > 32) throw std::invalid_argument("vector too long for a mask");
  std::uint32_t mask = 0;
  for (std::size_t d = 0; d < x.size(); ++d)
    if (x[d]) mask |= (1u << d);
  return mask;
}

BinaryVector complement(const BinaryVector& x) {
  BinaryVector y(x.size());
  for (std::size_t d = 0; d < x.size(); ++d) y[d] = x[d] ? 0 : 1;
  return y;
}

namespace {

void check_dim(const SetFunction& f, const BinaryVector& x) {
  if (static_cast<int>(x.size()) != f.dim())
    throw std::invalid_argument("dimension mismatch");
}

}  // namespace

CutFunction::CutFunction(int num_nodes, std::vector<Edge> edges)
    : num_nodes_(num_nodes), edges_(std::move(edges)) {
  if (num_nodes_ < 0) throw std::invalid_argument("negative node count");
  std::set<std::pair<int, int>> seen;
  for (const Edge& e : edges_) {
    if (e.i < 0 || e.j >= num_nodes_ || e.i >= e.j)
      throw std::invalid_argument("bad edge endpoints");
    if (!(e.w >= 0.0) || !std::isfinite(e.w))
      throw std::invalid_argument("edge weight must be finite and >= 0");
    if (!seen.emplace(e.i, e.j).second)
      throw std::invalid_argument("duplicate edge");
  }
}

double CutFunction::eval(const BinaryVector& x) const {
  check_dim(*this, x);
  double v = 0;
  for (const Edge& e : edges_)
    if (x[e.i] != x[e.j]) v += e.w;
  return v;
}

CutFunction CutFunction::parse(std::istream& in) {
  int n = 0;
  long long m = 0;
  if (!(in >> n >> m) || n < 1 || m < 0)
    throw DataError("graph file: expected header \"D E\"");
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (long long k = 0; k < m; ++k) {
    Edge e{};
    if (!(in >> e.i >> e.j >> e.w))
      throw DataError("graph file: truncated edge list");
    if (std::isnan(e.w)) throw DataError("graph file: NaN weight");
    if (e.i > e.j) std::swap(e.i, e.j);
    edges.push_back(e);
  }
  std::string rest;
  if (in >> rest) throw DataError("graph file: trailing content");
  try {
    return CutFunction(n, std::move(edges));
  } catch (const std::invalid_argument& err) {
    throw DataError(std::string("graph file: ") + err.what());
  }
}

void CutFunction::serialize(std::ostream& out) const {
  out << num_nodes_ << ' ' << edges_.size() << '\n';
  char buf[64];
  for (const Edge& e : edges_) {
    std::snprintf(buf, sizeof(buf), "%.17g", e.w);
    out << e.i << ' ' << e.j << ' ' << buf << '\n';
  }
}

TabulatedFunction::TabulatedFunction(int dim, std::vector<double> values)
    : dim_(dim), values_(std::move(values)) {
  if (dim_ < 0 || dim_ > 20) throw std::invalid_argument("tabulated dim out of range");
  if (values_.size() != (std::size_t{1} << dim_))
    throw std::invalid_argument("tabulated table has wrong size");
}

double TabulatedFunction::eval(const BinaryVector& x) const {
  check_dim(*this, x);
  return values_[mask_from_vector(x)];
}

SubmodularMixture::SubmodularMixture(std::vector<SetFunctionPtr> base_functions,
                                     std::vector<double> alpha,
                                     std::vector<double> t)
    : bases_(std::move(base_functions)), alpha_(std::move(alpha)), t_(std::move(t)) {
  if (bases_.size() != alpha_.size())
    throw std::invalid_argument("mixture: alpha size != number of bases");
  for (double a : alpha_)
    if (!(a >= 0.0) || !std::isfinite(a))
      throw std::invalid_argument("mixture: alpha must be finite and >= 0");
  for (const auto& f : bases_) {
    if (!f) throw std::invalid_argument("mixture: null base function");
    if (f->dim() != dim())
      throw std::invalid_argument("mixture: base dimension mismatch");
  }
}

double SubmodularMixture::eval(const BinaryVector& x) const {
  check_dim(*this, x);
  double v = 0;
  for (std::size_t k = 0; k < bases_.size(); ++k)
    if (alpha_[k] != 0.0) v += alpha_[k] * bases_[k]->eval(x);
  for (std::size_t d = 0; d < t_.size(); ++d)
    if (x[d]) v -= t_[d];
  return v;
}

double marginal_gain(const SetFunction& f, const BinaryVector& x, int d) {
  check_dim(f, x);
  if (d < 0 || d >= f.dim()) throw std::invalid_argument("index out of range");
  if (x[d] != 0) throw std::invalid_argument("marginal_gain requires x_d = 0");
  BinaryVector y = x;
  y[d] = 1;
  return f.eval(y) - f.eval(x);
}

bool is_submodular_bruteforce(const SetFunction& f, double tol) {
  const int dim = f.dim();
  if (dim > 12) throw std::invalid_argument("is_submodular_bruteforce: D > 12");
  const std::uint32_t n = 1u << dim;
  std::vector<double> table(n);
  for (std::uint32_t mask = 0; mask < n; ++mask)
    table[mask] = f.eval(vector_from_mask(mask, dim));
  for (std::uint32_t mask = 0; mask < n; ++mask) {
    for (int i = 0; i < dim; ++i) {
      if (mask & (1u << i)) continue;
      for (int j = i + 1; j < dim; ++j) {
        if (mask & (1u << j)) continue;
        const double second_diff = table[mask | (1u << i) | (1u << j)] -
                                   table[mask | (1u << i)] -
                                   table[mask | (1u << j)] + table[mask];
        if (second_diff > tol) return false;
      }
    }
  }
  return true;
}

BasePoint greedy_base_vertex(const SetFunction& f, const std::vector<double>& w) {
  const int dim = f.dim();
  if (static_cast<int>(w.size()) != dim)
    throw std::invalid_argument("dimension mismatch");
  std::vector<int> order(static_cast<std::size_t>(dim));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&w](int a, int b) { return w[a] > w[b]; });
  BasePoint s;
  s.s.assign(static_cast<std::size_t>(dim), 0.0);
  BinaryVector x(static_cast<std::size_t>(dim), 0);
  double prev = 0.0;  // f(0) = 0 by normalization
  for (int idx : order) {
    x[idx] = 1;
    const double cur = f.eval(x);
    s.s[idx] = cur - prev;
    prev = cur;
  }
  return s;
}

double lovasz_extension(const SetFunction& f, const std::vector<double>& w) {
  return dot(w, greedy_base_vertex(f, w).s);
}

bool in_base_polytope(const SetFunction& f, const BasePoint& s, double tol) {
  const int dim = f.dim();
  if (dim > 16) throw std::invalid_argument("in_base_polytope: D > 16");
  if (static_cast<int>(s.s.size()) != dim)
    throw std::invalid_argument("dimension mismatch");
  const std::uint32_t n = 1u << dim;
  double s_total = 0;
  for (double v : s.s) s_total += v;
  BinaryVector ones(static_cast<std::size_t>(dim), 1);
  if (std::abs(s_total - f.eval(ones)) > tol) return false;
  for (std::uint32_t mask = 0; mask < n; ++mask) {
    double sa = 0;
    for (int d = 0; d < dim; ++d)
      if (mask & (1u << d)) sa += s.s[d];
    if (sa > f.eval(vector_from_mask(mask, dim)) + tol) return false;
  }
  return true;
}

namespace {

class RestrictedSetFunction : public SetFunction {
 public:
  RestrictedSetFunction(SetFunctionPtr base, std::vector<int> assignment)
      : base_(std::move(base)), assignment_(std::move(assignment)) {
    for (std::size_t d = 0; d < assignment_.size(); ++d) {
      if (assignment_[d] == -1)
        free_.push_back(static_cast<int>(d));
      else if (assignment_[d] != 0 && assignment_[d] != 1)
        throw std::invalid_argument("assignment entries must be -1, 0, or 1");
    }
    BinaryVector zero_merge = merged(BinaryVector(free_.size(), 0));
    offset_ = base_->eval(zero_merge);
  }

  int dim() const override { return static_cast<int>(free_.size()); }

  double eval(const BinaryVector& y) const override {
    check_dim(*this, y);
    return base_->eval(merged(y)) - offset_;
  }

 private:
  BinaryVector merged(const BinaryVector& y) const {
    BinaryVector x(assignment_.size());
    for (std::size_t d = 0; d < assignment_.size(); ++d)
      x[d] = assignment_[d] == -1 ? 0 : static_cast<std::uint8_t>(assignment_[d]);
    for (std::size_t k = 0; k < free_.size(); ++k) x[free_[k]] = y[k];
    return x;
  }

  SetFunctionPtr base_;
  std::vector<int> assignment_;
  std::vector<int> free_;
  double offset_ = 0;
};

void check_assignment(int dim, const std::vector<int>& assignment) {
  if (static_cast<int>(assignment.size()) != dim)
    throw std::invalid_argument("assignment length must equal D");
  for (int v : assignment)
    if (v < -1 || v > 1)
      throw std::invalid_argument("assignment entries must be -1, 0, or 1");
}

}  // namespace

SetFunctionPtr restrict_and_contract(SetFunctionPtr f,
                                     const std::vector<int>& assignment) {
  if (!f) throw std::invalid_argument("null function");
  check_assignment(f->dim(), assignment);
  return std::make_shared<RestrictedSetFunction>(std::move(f), assignment);
}

SubmodularMixture condition(const SubmodularMixture& m,
                            const std::vector<int>& assignment) {
  const int dim = m.dim();
  check_assignment(dim, assignment);

  std::vector<int> new_index(static_cast<std::size_t>(dim), -1);
  int free_count = 0;
  for (int d = 0; d < dim; ++d)
    if (assignment[d] == -1) new_index[d] = free_count++;

  std::vector<double> t_new(static_cast<std::size_t>(free_count));
  for (int d = 0; d < dim; ++d)
    if (new_index[d] >= 0) t_new[new_index[d]] = m.t()[d];

  std::vector<SetFunctionPtr> bases_new;
  bases_new.reserve(m.bases().size());
  for (std::size_t k = 0; k < m.bases().size(); ++k) {
    const auto* cut = dynamic_cast<const CutFunction*>(m.bases()[k].get());
    if (cut == nullptr) {
      bases_new.push_back(restrict_and_contract(m.bases()[k], assignment));
      continue;
    }
    std::vector<CutFunction::Edge> edges;
    std::vector<double> shift(static_cast<std::size_t>(free_count), 0.0);
    for (const auto& e : cut->edges()) {
      const int ai = assignment[e.i], aj = assignment[e.j];
      if (ai == -1 && aj == -1) {
        int ni = new_index[e.i], nj = new_index[e.j];
        if (ni > nj) std::swap(ni, nj);
        edges.push_back({ni, nj, e.w});
      } else if (ai == -1) {
        shift[new_index[e.i]] += aj == 0 ? e.w : -e.w;
      } else if (aj == -1) {
        shift[new_index[e.j]] += ai == 0 ? e.w : -e.w;
      }
      // both fixed: constant, dropped by normalization
    }
    bases_new.push_back(
        std::make_shared<CutFunction>(free_count, std::move(edges)));
    // conditioned base is cut' + shift'y; fold the modular part into t
    for (int d = 0; d < free_count; ++d) t_new[d] -= m.alpha()[k] * shift[d];
  }
  return SubmodularMixture(std::move(bases_new), m.alpha(), std::move(t_new));
}

}  // namespace lsm
