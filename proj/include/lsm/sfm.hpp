#ifndef LSM_SFM_HPP
#define LSM_SFM_HPP

#include <vector>

#include "lsm/maxflow.hpp"
#include "lsm/submodular.hpp"

namespace lsm {

enum class Solver { bruteforce, maxflow };

struct MinimizationResult {
  BinaryVector argmin;
  double value;
  Solver solver;
};

// Exact minimum of f(x) - extra_modular'x over {0,1}^D by enumeration,
// D <= 20. Ties go to the smallest argmin read as a little-endian integer.
MinimizationResult minimize_bruteforce(const SetFunction& f,
                                       const std::vector<double>& extra_modular = {});

bool all_cut_bases(const SubmodularMixture& m);

// Pairwise-energy reduction for cut mixtures. With c_d = -(t_d + extra_d):
// arc source->d with capacity max(-c_d, 0), arc d->sink with capacity
// max(c_d, 0), and antiparallel arcs of capacity alpha_k * w for every cut
// edge. Labels read x_d = 1 iff d lands on the source side, under which
// min-cut value - constant_offset() = min_x f(x) - extra'x.
FlowNetwork build_flow_network(const SubmodularMixture& m,
                               const std::vector<double>& extra_modular = {});

// MAP oracle: argmin of f(x) - extra_modular'x. Dispatches to max-flow when
// every base is a cut, otherwise to brute force (D <= 20), otherwise throws
// UnsupportedModelError.
MinimizationResult minimize(const SubmodularMixture& m,
                            const std::vector<double>& extra_modular = {});

}  // namespace lsm

#endif
