#ifndef LSM_MAXFLOW_HPP
#define LSM_MAXFLOW_HPP

#include <iosfwd>
#include <vector>

#include "lsm/submodular.hpp"

namespace lsm {

// s-t network over D variable nodes plus the two terminals. Node ids:
// 0..D-1 variables, D source, D+1 sink. Residual state lives inside, so one
// instance serves a single max_flow call; build a fresh network per solve.
class FlowNetwork {
 public:
  explicit FlowNetwork(int num_variables);

  int num_variables() const { return num_vars_; }
  int source() const { return num_vars_; }
  int sink() const { return num_vars_ + 1; }

  // capacity >= 0 and finite; no arcs into the source or out of the sink.
  void add_arc(int from, int to, double capacity);

  // Constant such that min-cut value - offset = min of the encoded energy.
  double constant_offset() const { return offset_; }
  void set_constant_offset(double v) { offset_ = v; }

  void dump_dimacs(std::ostream& out) const;

  // Capacity of the cut (S, T) with S = {source} + {d : source_side[d]=1},
  // measured on the original capacities.
  double cut_capacity(const BinaryVector& source_side) const;

 private:
  friend struct MaxFlowSolver;
  struct Arc {
    int to;
    double cap;   // residual
    double cap0;  // as built
    int rev;      // index of the reverse arc in adj_[to]
  };
  int num_vars_;
  double offset_ = 0;
  std::vector<std::vector<Arc>> adj_;
};

struct MaxFlowResult {
  double flow_value;
  // source_side[d] = 1 iff variable node d is reachable from the source in
  // the final residual graph (the canonical minimal source side).
  BinaryVector source_side;
};

// Dinic's algorithm: BFS level phases + blocking flow. Exact on real-valued
// capacities up to accumulation error. Mutates the network's residual state.
MaxFlowResult max_flow(FlowNetwork& net);

}  // namespace lsm

#endif
