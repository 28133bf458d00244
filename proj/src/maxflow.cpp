#include "lsm/maxflow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace lsm {

namespace {
// Residual capacities below this are treated as saturated.
constexpr double kResidualEps = 1e-12;
}  // namespace

FlowNetwork::FlowNetwork(int num_variables) : num_vars_(num_variables) {
  if (num_variables < 0) throw std::invalid_argument("negative variable count");
  adj_.resize(static_cast<std::size_t>(num_variables) + 2);
}

void FlowNetwork::add_arc(int from, int to, double capacity) {
  const int n = num_vars_ + 2;
  if (from < 0 || from >= n || to < 0 || to >= n || from == to)
    throw std::invalid_argument("bad arc endpoints");
  if (to == source() || from == sink())
    throw std::invalid_argument("arc into source or out of sink");
  if (!(capacity >= 0.0) || !std::isfinite(capacity))
    throw std::invalid_argument("capacity must be finite and >= 0");
  adj_[from].push_back({to, capacity, capacity, static_cast<int>(adj_[to].size())});
  adj_[to].push_back({from, 0.0, 0.0, static_cast<int>(adj_[from].size()) - 1});
}

void FlowNetwork::dump_dimacs(std::ostream& out) const {
  std::size_t arcs = 0;
  for (const auto& a : adj_)
    for (const auto& arc : a)
      if (arc.cap0 > 0) ++arcs;
  // 1-based ids; source and sink first as DIMACS expects
  out << "p max " << num_vars_ + 2 << ' ' << arcs << '\n';
  out << "n " << source() + 1 << " s\n";
  out << "n " << sink() + 1 << " t\n";
  for (int u = 0; u < num_vars_ + 2; ++u)
    for (const auto& arc : adj_[u])
      if (arc.cap0 > 0)
        out << "a " << u + 1 << ' ' << arc.to + 1 << ' ' << arc.cap0 << '\n';
}

double FlowNetwork::cut_capacity(const BinaryVector& source_side) const {
  if (static_cast<int>(source_side.size()) != num_vars_)
    throw std::invalid_argument("dimension mismatch");
  auto in_s = [&](int node) {
    if (node == source()) return true;
    if (node == sink()) return false;
    return source_side[node] != 0;
  };
  double total = 0;
  for (int u = 0; u < num_vars_ + 2; ++u) {
    if (!in_s(u)) continue;
    for (const auto& arc : adj_[u])
      if (!in_s(arc.to)) total += arc.cap0;
  }
  return total;
}

struct MaxFlowSolver {
  FlowNetwork& net;
  std::vector<int> level;
  std::vector<int> iter;
  std::vector<int> queue;

  explicit MaxFlowSolver(FlowNetwork& n)
      : net(n),
        level(n.adj_.size()),
        iter(n.adj_.size()),
        queue(n.adj_.size()) {}

  bool bfs() {
    std::fill(level.begin(), level.end(), -1);
    int head = 0, tail = 0;
    level[net.source()] = 0;
    queue[tail++] = net.source();
    while (head < tail) {
      const int u = queue[head++];
      for (const auto& arc : net.adj_[u]) {
        if (arc.cap > kResidualEps && level[arc.to] < 0) {
          level[arc.to] = level[u] + 1;
          queue[tail++] = arc.to;
        }
      }
    }
    return level[net.sink()] >= 0;
  }

  double dfs(int u, double limit) {
    if (u == net.sink()) return limit;
    for (int& i = iter[u]; i < static_cast<int>(net.adj_[u].size()); ++i) {
      auto& arc = net.adj_[u][i];
      if (arc.cap <= kResidualEps || level[arc.to] != level[u] + 1) continue;
      const double pushed = dfs(arc.to, std::min(limit, arc.cap));
      if (pushed > 0) {
        arc.cap -= pushed;
        net.adj_[arc.to][arc.rev].cap += pushed;
        return pushed;
      }
    }
    level[u] = -1;
    return 0;
  }

  double run() {
    double flow = 0;
    const double inf = std::numeric_limits<double>::infinity();
    while (bfs()) {
      std::fill(iter.begin(), iter.end(), 0);
      while (true) {
        const double pushed = dfs(net.source(), inf);
        if (pushed <= 0) break;
        flow += pushed;
      }
    }
    return flow;
  }
};

MaxFlowResult max_flow(FlowNetwork& net) {
  MaxFlowSolver solver(net);
  MaxFlowResult result;
  result.flow_value = solver.run();
  // final BFS in the solver already marks residual reachability
  result.source_side.assign(static_cast<std::size_t>(net.num_variables()), 0);
  for (int d = 0; d < net.num_variables(); ++d)
    if (solver.level[d] >= 0) result.source_side[d] = 1;
  return result;
}

}  // namespace lsm
