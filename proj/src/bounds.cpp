#include "lsm/bounds.hpp"

#include <cmath>
#include <stdexcept>

#include "lsm/numeric.hpp"
#include "lsm/rng.hpp"

namespace lsm {

BoundResult exact_log_partition(const SetFunction& f) {
  const int dim = f.dim();
  if (dim > 20) throw std::invalid_argument("exact_log_partition: D > 20");
  LogSumExp lse;
  BinaryVector x(static_cast<std::size_t>(dim), 0);
  const std::uint32_t n = 1u << dim;
  for (std::uint32_t mask = 0; mask < n; ++mask) {
    for (int d = 0; d < dim; ++d) x[d] = (mask >> d) & 1u;
    lse.add(-f.eval(x));
  }
  BoundResult r;
  r.value = lse.value();
  r.kind = BoundKind::exact;
  return r;
}

namespace {

// One divide-and-conquer block: g is the conditioned mixture on the block,
// idx maps its coordinates back to the original ones.
void min_norm_block(const SubmodularMixture& g, const std::vector<int>& idx,
                    double tol_dc, std::vector<double>& out) {
  const int nb = g.dim();
  if (nb == 0) return;
  const BinaryVector ones(static_cast<std::size_t>(nb), 1);
  const double beta = g.eval(ones) / nb;
  const std::vector<double> extra(static_cast<std::size_t>(nb), beta);
  const MinimizationResult res = minimize(g, extra);

  int cnt = 0;
  for (auto b : res.argmin) cnt += b;
  if (res.value >= -tol_dc || cnt == 0 || cnt == nb) {
    for (int d = 0; d < nb; ++d) out[idx[d]] = beta;
    return;
  }

  // split at the strict minimizer A: restriction to A, contraction by A
  std::vector<int> fix_rest(static_cast<std::size_t>(nb));
  std::vector<int> fix_cont(static_cast<std::size_t>(nb));
  std::vector<int> idx_rest, idx_cont;
  for (int d = 0; d < nb; ++d) {
    if (res.argmin[d]) {
      fix_rest[d] = -1;
      fix_cont[d] = 1;
      idx_rest.push_back(idx[d]);
    } else {
      fix_rest[d] = 0;
      fix_cont[d] = -1;
      idx_cont.push_back(idx[d]);
    }
  }
  min_norm_block(condition(g, fix_rest), idx_rest, tol_dc, out);
  min_norm_block(condition(g, fix_cont), idx_cont, tol_dc, out);
}

}  // namespace

BasePoint min_norm_point(const SubmodularMixture& f, double tol_dc) {
  const int dim = f.dim();
  BasePoint s;
  s.s.assign(static_cast<std::size_t>(dim), 0.0);
  std::vector<int> idx(static_cast<std::size_t>(dim));
  for (int d = 0; d < dim; ++d) idx[d] = d;
  min_norm_block(f, idx, tol_dc, s.s);
  return s;
}

BoundResult lfield_bound(const SubmodularMixture& f) {
  BasePoint s = min_norm_point(f);
  double v = 0;
  for (double sd : s.s) v += softplus(-sd);
  BoundResult r;
  r.value = v;
  r.kind = BoundKind::lfield;
  r.witness = std::move(s);
  return r;
}

BoundResult logistic_bound(const SubmodularMixture& f, int num_samples,
                           std::uint64_t seed) {
  if (num_samples < 1) throw std::invalid_argument("need at least one sample");
  const int dim = f.dim();
  double mean = 0, m2 = 0;
  for (int m = 0; m < num_samples; ++m) {
    const std::vector<double> z = logistic_vector(derive_seed(seed, m), dim);
    const double v = -minimize(f, z).value;  // max_y z'y - f(y)
    const double delta = v - mean;
    mean += delta / (m + 1);
    m2 += delta * (v - mean);
  }
  BoundResult r;
  r.value = mean;
  r.kind = BoundKind::logistic;
  r.std_error = num_samples > 1
                    ? std::sqrt(m2 / (num_samples - 1) / num_samples)
                    : 0.0;
  return r;
}

BoundResult superdiff_lower_bound(const SetFunction& f, const BinaryVector& anchor) {
  const int dim = f.dim();
  if (static_cast<int>(anchor.size()) != dim)
    throw std::invalid_argument("dimension mismatch");
  const double f_anchor = f.eval(anchor);
  // modular upper bound m(x) = c0 + coef'x with grow/shrink gains at anchor
  double c0 = f_anchor;
  double value = 0;
  BinaryVector x = anchor;
  for (int d = 0; d < dim; ++d) {
    double coef;
    if (anchor[d]) {
      x[d] = 0;
      coef = f_anchor - f.eval(x);
      x[d] = 1;
      c0 -= coef;
    } else {
      x[d] = 1;
      coef = f.eval(x) - f_anchor;
      x[d] = 0;
    }
    value += softplus(-coef);
  }
  BoundResult r;
  r.value = value - c0;
  r.kind = BoundKind::superdiff_lower;
  return r;
}

BoundResult superdiff_lower_bound(const SubmodularMixture& f) {
  return superdiff_lower_bound(f, minimize(f).argmin);
}

MarginalVector lfield_marginals(const SubmodularMixture& f) {
  const BasePoint s = min_norm_point(f);
  MarginalVector m;
  m.mu.reserve(s.s.size());
  for (double sd : s.s) m.mu.push_back(sigmoid(-sd));
  return m;
}

MarginalVector logistic_marginals(const SubmodularMixture& f, int num_samples,
                                  std::uint64_t seed) {
  if (num_samples < 1) throw std::invalid_argument("need at least one sample");
  const int dim = f.dim();
  MarginalVector m;
  m.mu.assign(static_cast<std::size_t>(dim), 0.0);
  for (int i = 0; i < num_samples; ++i) {
    const std::vector<double> z = logistic_vector(derive_seed(seed, i), dim);
    const BinaryVector y = minimize(f, z).argmin;
    for (int d = 0; d < dim; ++d)
      if (y[d]) m.mu[d] += 1.0;
  }
  for (double& v : m.mu) v /= num_samples;
  return m;
}

}  // namespace lsm
