#include <cmath>
#include <functional>
#include <ostream>
#include <string>

#include "lsm/bounds.hpp"
#include "lsm/experiments.hpp"
#include "lsm/numeric.hpp"
#include "lsm/rng.hpp"
#include "lsm/sfm.hpp"

namespace lsm {

namespace {

CutFunction random_cut(int dim, SplitMix64& g, double edge_prob = 0.5,
                       double w_max = 2.0) {
  std::vector<CutFunction::Edge> edges;
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j)
      if (g.uniform01() < edge_prob) edges.push_back({i, j, w_max * g.uniform01()});
  return CutFunction(dim, std::move(edges));
}

SubmodularMixture random_mixture(int dim, SplitMix64& g, double t_scale = 1.0) {
  auto f1 = std::make_shared<CutFunction>(random_cut(dim, g));
  auto f2 = std::make_shared<CutFunction>(random_cut(dim, g));
  std::vector<double> t(static_cast<std::size_t>(dim));
  for (auto& v : t) v = t_scale * (2.0 * g.uniform01() - 1.0);
  return SubmodularMixture({f1, f2}, {g.uniform01(), g.uniform01()}, std::move(t));
}

bool base_membership_suite() {
  SplitMix64 g(11);
  for (int rep = 0; rep < 20; ++rep) {
    const SubmodularMixture m = random_mixture(6, g);
    std::vector<double> w(6);
    for (auto& v : w) v = 4.0 * g.uniform01() - 2.0;
    const BasePoint s = greedy_base_vertex(m, w);
    if (!in_base_polytope(m, s)) return false;
    const BinaryVector x = vector_from_mask(static_cast<std::uint32_t>(g.next() & 63u), 6);
    std::vector<double> xw(x.begin(), x.end());
    if (std::abs(lovasz_extension(m, xw) - m.eval(x)) > kNumTol) return false;
  }
  return true;
}

bool solver_equivalence_suite() {
  SplitMix64 g(12);
  for (int rep = 0; rep < 40; ++rep) {
    const int dim = 4 + static_cast<int>(g.below(9));
    const SubmodularMixture m = random_mixture(dim, g);
    std::vector<double> extra(static_cast<std::size_t>(dim));
    for (auto& v : extra) v = 2.0 * g.uniform01() - 1.0;
    FlowNetwork net = build_flow_network(m, extra);
    const MaxFlowResult flow = max_flow(net);
    const MinimizationResult brute = minimize_bruteforce(m, extra);
    const double flow_min = flow.flow_value - net.constant_offset();
    if (std::abs(flow_min - brute.value) > 1e-8) return false;
    if (std::abs(net.cut_capacity(flow.source_side) - flow.flow_value) > 1e-8)
      return false;
  }
  return true;
}

bool bound_ordering_suite() {
  SplitMix64 g(13);
  for (int rep = 0; rep < 10; ++rep) {
    const SubmodularMixture m = random_mixture(8, g);
    const double exact = exact_log_partition(m).value;
    const BoundResult lf = lfield_bound(m);
    const BoundResult lg = logistic_bound(m, 500, g.next());
    const BoundResult lo = superdiff_lower_bound(m);
    const double guard = 4.0 * *lg.std_error;
    if (exact > lg.value + guard) return false;
    if (lg.value > lf.value + guard) return false;
    if (lo.value > exact + kNumTol) return false;
  }
  return true;
}

bool lfield_exactness_suite() {
  SplitMix64 g(14);
  for (int rep = 0; rep < 10; ++rep) {
    const int dim = 6;
    std::vector<double> t(dim);
    for (auto& v : t) v = 4.0 * g.uniform01() - 2.0;
    const SubmodularMixture modular({}, {}, t);
    const double exact = exact_log_partition(modular).value;
    if (std::abs(lfield_bound(modular).value - exact) > kNumTol) return false;

    // strong duality on a non-modular instance
    const SubmodularMixture m = random_mixture(dim, g);
    const BoundResult lf = lfield_bound(m);
    const MarginalVector mu = lfield_marginals(m);
    double entropy = 0;
    for (double v : mu.mu) entropy += bernoulli_entropy(v);
    if (std::abs(entropy - lovasz_extension(m, mu.mu) - lf.value) > 1e-6)
      return false;
  }
  return true;
}

bool conditioning_suite() {
  SplitMix64 g(15);
  for (int rep = 0; rep < 10; ++rep) {
    const SubmodularMixture m = random_mixture(8, g);
    std::vector<int> assignment(8, -1);
    assignment[1] = 0;
    assignment[4] = 1;
    assignment[6] = static_cast<int>(g.next() & 1u);
    const SubmodularMixture cond = condition(m, assignment);
    if (!is_submodular_bruteforce(cond)) return false;
    const SetFunctionPtr wrapped = restrict_and_contract(
        std::make_shared<SubmodularMixture>(m), assignment);
    for (std::uint32_t mask = 0; mask < 32; ++mask) {
      const BinaryVector y = vector_from_mask(mask, 5);
      if (std::abs(cond.eval(y) - wrapped->eval(y)) > kNumTol) return false;
    }
  }
  return true;
}

bool noise_and_shapes_suite() {
  SplitMix64 g(16);
  const auto shapes = gen_shapes(20, 12, 12, 99);
  for (const auto& s : shapes) {
    int fg = 0;
    for (auto b : s) fg += b;
    if (fg < 1) return false;
  }
  const BinaryVector x = shapes[0];
  if (flip_noise(x, 0.0, g.next()) != x) return false;
  if (flip_noise(x, 1.0, g.next()) != complement(x)) return false;
  return true;
}

}  // namespace

int selftest(std::ostream& out) {
  const std::pair<const char*, std::function<bool()>> suites[] = {
      {"greedy base-polytope membership", base_membership_suite},
      {"max-flow vs brute-force equivalence", solver_equivalence_suite},
      {"bound ordering", bound_ordering_suite},
      {"L-field tightness and duality", lfield_exactness_suite},
      {"conditioning", conditioning_suite},
      {"noise channel and shape generator", noise_and_shapes_suite},
  };
  int failed = 0;
  for (const auto& [name, fn] : suites) {
    const bool ok = fn();
    out << (ok ? "ok   " : "FAIL ") << name << '\n';
    failed += ok ? 0 : 1;
  }
  out << "selftest: " << std::size(suites) - failed << " passed, " << failed
      << " failed\n";
  return failed;
}

}  // namespace lsm
