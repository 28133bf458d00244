#include "lsm/sfm.hpp"

#include <cmath>
#include <stdexcept>

#include "lsm/errors.hpp"

namespace lsm {

MinimizationResult minimize_bruteforce(const SetFunction& f,
                                       const std::vector<double>& extra_modular) {
  const int dim = f.dim();
  if (dim > 20) throw std::invalid_argument("minimize_bruteforce: D > 20");
  if (!extra_modular.empty() && static_cast<int>(extra_modular.size()) != dim)
    throw std::invalid_argument("dimension mismatch");

  const std::uint32_t n = 1u << dim;
  BinaryVector x(static_cast<std::size_t>(dim), 0);
  double best = f.eval(x);
  std::uint32_t best_mask = 0;
  for (std::uint32_t mask = 1; mask < n; ++mask) {
    for (int d = 0; d < dim; ++d) x[d] = (mask >> d) & 1u;
    double v = f.eval(x);
    if (!extra_modular.empty())
      for (int d = 0; d < dim; ++d)
        if (x[d]) v -= extra_modular[d];
    if (v < best) {
      best = v;
      best_mask = mask;
    }
  }
  return {vector_from_mask(best_mask, dim), best, Solver::bruteforce};
}

bool all_cut_bases(const SubmodularMixture& m) {
  for (const auto& f : m.bases())
    if (dynamic_cast<const CutFunction*>(f.get()) == nullptr) return false;
  return true;
}

FlowNetwork build_flow_network(const SubmodularMixture& m,
                               const std::vector<double>& extra_modular) {
  if (!all_cut_bases(m))
    throw UnsupportedModelError("build_flow_network: non-cut base function");
  const int dim = m.dim();
  if (!extra_modular.empty() && static_cast<int>(extra_modular.size()) != dim)
    throw std::invalid_argument("dimension mismatch");

  FlowNetwork net(dim);
  double offset = 0;
  for (int d = 0; d < dim; ++d) {
    const double c = -(m.t()[d] + (extra_modular.empty() ? 0.0 : extra_modular[d]));
    if (c > 0) net.add_arc(d, net.sink(), c);
    if (c < 0) {
      net.add_arc(net.source(), d, -c);
      offset += -c;
    }
  }
  for (std::size_t k = 0; k < m.bases().size(); ++k) {
    const double a = m.alpha()[k];
    if (a == 0.0) continue;
    const auto& cut = static_cast<const CutFunction&>(*m.bases()[k]);
    for (const auto& e : cut.edges()) {
      if (e.w == 0.0) continue;
      net.add_arc(e.i, e.j, a * e.w);
      net.add_arc(e.j, e.i, a * e.w);
    }
  }
  net.set_constant_offset(offset);
  return net;
}

MinimizationResult minimize(const SubmodularMixture& m,
                            const std::vector<double>& extra_modular) {
  const int dim = m.dim();
  if (dim == 0) return {BinaryVector{}, 0.0, Solver::bruteforce};
  if (all_cut_bases(m)) {
    FlowNetwork net = build_flow_network(m, extra_modular);
    MaxFlowResult flow = max_flow(net);
    double value = m.eval(flow.source_side);
    if (!extra_modular.empty())
      for (int d = 0; d < dim; ++d)
        if (flow.source_side[d]) value -= extra_modular[d];
    return {std::move(flow.source_side), value, Solver::maxflow};
  }
  if (dim <= 20) return minimize_bruteforce(m, extra_modular);
  throw UnsupportedModelError("minimize: non-cut bases with D > 20");
}

}  // namespace lsm
