#include "lsm/learning.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "lsm/errors.hpp"
#include "lsm/numeric.hpp"
#include "lsm/rng.hpp"
#include "lsm/sfm.hpp"

namespace lsm {

SufficientStats compute_stats(const std::vector<BinaryVector>& data,
                              const std::vector<SetFunctionPtr>& base_functions) {
  if (data.empty()) throw std::invalid_argument("compute_stats: empty data");
  const std::size_t dim = data.front().size();
  SufficientStats stats;
  stats.n_samples = static_cast<int>(data.size());
  stats.mean_fk.assign(base_functions.size(), 0.0);
  stats.mean_x.assign(dim, 0.0);
  for (const auto& x : data) {
    if (x.size() != dim) throw std::invalid_argument("dimension mismatch");
    for (std::size_t k = 0; k < base_functions.size(); ++k)
      stats.mean_fk[k] += base_functions[k]->eval(x);
    for (std::size_t d = 0; d < dim; ++d) stats.mean_x[d] += x[d];
  }
  for (auto& v : stats.mean_fk) v /= stats.n_samples;
  for (auto& v : stats.mean_x) v /= stats.n_samples;
  return stats;
}

TrainState make_train_state(int num_bases, int dim, std::uint64_t seed,
                            double step_c, double reg_alpha, double reg_t) {
  TrainState s;
  s.alpha.assign(static_cast<std::size_t>(num_bases), 0.0);
  s.t.assign(static_cast<std::size_t>(dim), 0.0);
  s.alpha_avg = s.alpha;
  s.t_avg = s.t;
  s.seed = seed;
  s.step_c = step_c;
  s.reg_alpha = reg_alpha;
  s.reg_t = reg_t;
  return s;
}

void update_running_average(std::vector<double>& avg,
                            const std::vector<double>& value,
                            long long count_after) {
  for (std::size_t i = 0; i < avg.size(); ++i)
    avg[i] += (value[i] - avg[i]) / static_cast<double>(count_after);
}

namespace {

// Shared tail of every step: apply subgradients at step C/sqrt(h), project
// alpha, advance the iterate averages.
void apply_update(TrainState& state, const std::vector<double>& grad_alpha,
                  const std::vector<double>& grad_t) {
  const long long h = state.h + 1;
  const double step = state.step_c / std::sqrt(static_cast<double>(h));
  for (std::size_t k = 0; k < state.alpha.size(); ++k)
    state.alpha[k] = std::max(0.0, state.alpha[k] - step * grad_alpha[k]);
  for (std::size_t d = 0; d < state.t.size(); ++d)
    state.t[d] -= step * grad_t[d];
  state.h = h;
  update_running_average(state.alpha_avg, state.alpha, h);
  update_running_average(state.t_avg, state.t, h);
  state.u_avg += (state.u - state.u_avg) / static_cast<double>(h);
}

std::vector<double> noise_shift(double u, const BinaryVector& z) {
  std::vector<double> m(z.size());
  for (std::size_t d = 0; d < z.size(); ++d) m[d] = u * (2.0 * z[d] - 1.0);
  return m;
}

}  // namespace

void sgd_ml_step(TrainState& state, const SufficientStats& stats,
                 const std::vector<SetFunctionPtr>& base_functions) {
  const std::size_t num_k = base_functions.size();
  if (state.alpha.size() != num_k || stats.mean_fk.size() != num_k ||
      state.t.size() != stats.mean_x.size())
    throw std::invalid_argument("dimension mismatch");

  const std::uint64_t iter_seed = derive_seed(state.seed, static_cast<std::uint64_t>(state.h) + 1);
  const std::vector<double> z =
      logistic_vector(derive_seed(iter_seed, 1), static_cast<int>(state.t.size()));
  const SubmodularMixture mix(base_functions, state.alpha, state.t);
  const BinaryVector y = minimize(mix, z).argmin;

  std::vector<double> ga(num_k), gt(state.t.size());
  for (std::size_t k = 0; k < num_k; ++k)
    ga[k] = stats.mean_fk[k] - base_functions[k]->eval(y) +
            state.reg_alpha * state.alpha[k];
  for (std::size_t d = 0; d < state.t.size(); ++d)
    gt[d] = y[d] - stats.mean_x[d] + state.reg_t * state.t[d];
  apply_update(state, ga, gt);
}

double estimate_flip_logit(const std::vector<NoisyPair>& pairs) {
  if (pairs.empty()) throw std::invalid_argument("no pairs");
  long long flips = 0, bits = 0;
  for (const auto& p : pairs) {
    if (!p.clean) throw std::invalid_argument("pair without clean image");
    if (p.clean->size() != p.noisy.size())
      throw std::invalid_argument("dimension mismatch");
    for (std::size_t d = 0; d < p.noisy.size(); ++d)
      flips += (*p.clean)[d] != p.noisy[d];
    bits += static_cast<long long>(p.noisy.size());
  }
  return clamped_logit(static_cast<double>(flips) / static_cast<double>(bits));
}

void conditional_sgd_step(TrainState& state, const std::vector<NoisyPair>& pairs,
                          const std::vector<SetFunctionPtr>& base_functions) {
  if (pairs.empty()) throw std::invalid_argument("no pairs");
  const std::size_t num_k = base_functions.size();
  const std::size_t dim = state.t.size();

  const std::uint64_t iter_seed = derive_seed(state.seed, static_cast<std::uint64_t>(state.h) + 1);
  SplitMix64 pick(iter_seed);
  const NoisyPair& pair = pairs[pick.below(pairs.size())];
  if (!pair.clean) throw std::invalid_argument("pair without clean image");
  const std::vector<double> z =
      logistic_vector(derive_seed(iter_seed, 1), static_cast<int>(dim));

  // conditional model: f(x) + u(2z-1)'x
  const std::vector<double> shift = noise_shift(state.u, pair.noisy);
  std::vector<double> extra(dim);
  for (std::size_t d = 0; d < dim; ++d) extra[d] = z[d] - shift[d];
  const SubmodularMixture mix(base_functions, state.alpha, state.t);
  const BinaryVector y = minimize(mix, extra).argmin;

  std::vector<double> ga(num_k), gt(dim);
  for (std::size_t k = 0; k < num_k; ++k)
    ga[k] = base_functions[k]->eval(*pair.clean) - base_functions[k]->eval(y) +
            state.reg_alpha * state.alpha[k];
  for (std::size_t d = 0; d < dim; ++d)
    gt[d] = y[d] - (*pair.clean)[d] + state.reg_t * state.t[d];
  apply_update(state, ga, gt);
}

void latent_sgd_step(TrainState& state, const std::vector<BinaryVector>& noisy,
                     const std::vector<SetFunctionPtr>& base_functions,
                     bool learn_u) {
  if (noisy.empty()) throw std::invalid_argument("no data");
  const std::size_t num_k = base_functions.size();
  const std::size_t dim = state.t.size();

  const std::uint64_t iter_seed = derive_seed(state.seed, static_cast<std::uint64_t>(state.h) + 1);
  SplitMix64 pick(iter_seed);
  const BinaryVector& z_obs = noisy[pick.below(noisy.size())];
  const std::vector<double> z1 =
      logistic_vector(derive_seed(iter_seed, 1), static_cast<int>(dim));
  const std::vector<double> z2 =
      logistic_vector(derive_seed(iter_seed, 2), static_cast<int>(dim));

  const std::vector<double> shift = noise_shift(state.u, z_obs);
  std::vector<double> extra1(dim);
  for (std::size_t d = 0; d < dim; ++d) extra1[d] = z1[d] - shift[d];

  const SubmodularMixture mix(base_functions, state.alpha, state.t);
  const BinaryVector y1 = minimize(mix, extra1).argmin;  // conditional term
  const BinaryVector y2 = minimize(mix, z2).argmin;      // free term

  std::vector<double> ga(num_k), gt(dim);
  for (std::size_t k = 0; k < num_k; ++k)
    ga[k] = base_functions[k]->eval(y1) - base_functions[k]->eval(y2) +
            state.reg_alpha * state.alpha[k];
  for (std::size_t d = 0; d < dim; ++d)
    gt[d] = static_cast<double>(y2[d]) - y1[d] + state.reg_t * state.t[d];

  if (learn_u) {
    double gu = static_cast<double>(dim) * sigmoid(state.u);
    for (std::size_t d = 0; d < dim; ++d)
      gu += (2.0 * z_obs[d] - 1.0) * y1[d] - z_obs[d];
    const double step =
        state.step_c / std::sqrt(static_cast<double>(state.h) + 1.0);
    state.u = std::clamp(state.u - step * gu, -kLogitClamp, kLogitClamp);
  }
  apply_update(state, ga, gt);
}

ModelParams finalize(const TrainState& state) {
  if (state.h == 0) throw std::logic_error("finalize: no training steps taken");
  return {state.alpha_avg, state.t_avg, state.u_avg};
}

LfieldDiagnostic lfield_ml_diagnostic(const SufficientStats& stats,
                                      const std::vector<SetFunctionPtr>& base_functions) {
  LfieldDiagnostic d;
  d.jensen_gap.reserve(base_functions.size());
  for (std::size_t k = 0; k < base_functions.size(); ++k)
    d.jensen_gap.push_back(stats.mean_fk[k] -
                           lovasz_extension(*base_functions[k], stats.mean_x));
  d.t_closed_form.reserve(stats.mean_x.size());
  for (double m : stats.mean_x) d.t_closed_form.push_back(clamped_logit(m));
  return d;
}

std::vector<double> lfield_ml_projected_gradient(
    const SufficientStats& stats,
    const std::vector<SetFunctionPtr>& base_functions,
    std::vector<double> alpha0, double step, int iterations) {
  const LfieldDiagnostic d = lfield_ml_diagnostic(stats, base_functions);
  for (int it = 0; it < iterations; ++it)
    for (std::size_t k = 0; k < alpha0.size(); ++k)
      alpha0[k] = std::max(0.0, alpha0[k] - step * d.jensen_gap[k]);
  return alpha0;
}

Estimate ml_objective_estimate(const SufficientStats& stats,
                               const std::vector<SetFunctionPtr>& base_functions,
                               const std::vector<double>& alpha,
                               const std::vector<double>& t,
                               const std::vector<std::vector<double>>& z_batch) {
  if (z_batch.empty()) throw std::invalid_argument("empty z batch");
  const SubmodularMixture mix(base_functions, alpha, t);
  double linear = -dot(t, stats.mean_x);
  for (std::size_t k = 0; k < alpha.size(); ++k)
    linear += alpha[k] * stats.mean_fk[k];

  double mean = 0, m2 = 0;
  int count = 0;
  for (const auto& z : z_batch) {
    const double v = -minimize(mix, z).value;
    ++count;
    const double delta = v - mean;
    mean += delta / count;
    m2 += delta * (v - mean);
  }
  Estimate e;
  e.value = linear + mean;
  e.std_error = count > 1 ? std::sqrt(m2 / (count - 1) / count) : 0.0;
  return e;
}

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void save_checkpoint(const Checkpoint& c, std::ostream& out) {
  out << "K " << c.params.alpha.size() << '\n';
  out << "D " << c.params.t.size() << '\n';
  out << "alpha";
  for (double a : c.params.alpha) out << ' ' << format_double(a);
  out << '\n';
  out << "t";
  for (double v : c.params.t) out << ' ' << format_double(v);
  out << '\n';
  out << "u " << format_double(c.params.u) << '\n';
  out << "h " << c.h << '\n';
  out << "seed " << c.seed << '\n';
}

Checkpoint load_checkpoint(std::istream& in) {
  auto expect_key = [&in](const char* key) {
    std::string k;
    if (!(in >> k) || k != key)
      throw DataError(std::string("checkpoint: expected key ") + key);
  };
  Checkpoint c;
  std::size_t num_k = 0, dim = 0;
  expect_key("K");
  if (!(in >> num_k)) throw DataError("checkpoint: bad K");
  expect_key("D");
  if (!(in >> dim)) throw DataError("checkpoint: bad D");
  expect_key("alpha");
  c.params.alpha.resize(num_k);
  for (auto& a : c.params.alpha)
    if (!(in >> a)) throw DataError("checkpoint: bad alpha");
  expect_key("t");
  c.params.t.resize(dim);
  for (auto& v : c.params.t)
    if (!(in >> v)) throw DataError("checkpoint: bad t");
  expect_key("u");
  if (!(in >> c.params.u)) throw DataError("checkpoint: bad u");
  expect_key("h");
  if (!(in >> c.h)) throw DataError("checkpoint: bad h");
  expect_key("seed");
  if (!(in >> c.seed)) throw DataError("checkpoint: bad seed");
  for (const double a : c.params.alpha)
    if (a < 0) throw DataError("checkpoint: negative alpha");
  return c;
}

}  // namespace lsm
