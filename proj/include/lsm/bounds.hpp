#ifndef LSM_BOUNDS_HPP
#define LSM_BOUNDS_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "lsm/sfm.hpp"
#include "lsm/submodular.hpp"

namespace lsm {

enum class BoundKind { exact, lfield, logistic, superdiff_lower };

struct BoundResult {
  double value = 0;  // nats
  BoundKind kind = BoundKind::exact;
  std::optional<double> std_error;   // logistic only: sample std / sqrt(M)
  std::optional<BasePoint> witness;  // lfield only: the min-norm point
};

struct MarginalVector {
  std::vector<double> mu;  // each in [0,1]
};

// A(f) = log sum_x exp(-f(x)) by stable enumeration, D <= 20.
BoundResult exact_log_partition(const SetFunction& f);

// Euclidean projection of the origin onto B(f) by divide and conquer: on a
// block V, the uniform candidate is beta = f(V)/|V|; if min_A f(A) - beta|A|
// is >= -tol the block takes value beta, otherwise the block splits at the
// minimizer into a restriction and a contraction.
BasePoint min_norm_point(const SubmodularMixture& f, double tol_dc = 1e-9);

// A_{L-field}(f) = sum_d log(1 + e^{-s*_d}) at the min-norm point s*.
BoundResult lfield_bound(const SubmodularMixture& f);

// Perturb-and-MAP estimate of A_{logistic}(f): average of
// max_y z'y - f(y) over num_samples i.i.d. logistic vectors z. Sample m
// draws its own generator from derive_seed(seed, m), so the estimate is
// bit-identical however samples are scheduled.
BoundResult logistic_bound(const SubmodularMixture& f, int num_samples,
                           std::uint64_t seed);

// Lower bound from the modular upper bound of f anchored at the support of
// `anchor` (grow/shrink gains at that set). The overload without an anchor
// uses the minimizer of f.
BoundResult superdiff_lower_bound(const SetFunction& f, const BinaryVector& anchor);
BoundResult superdiff_lower_bound(const SubmodularMixture& f);

// Gradient of the L-field bound in the modular direction: mu_d = sigma(-s*_d).
// Oriented so that increasing t_d increases mu_d.
MarginalVector lfield_marginals(const SubmodularMixture& f);

// Gradient of the logistic bound: the average of the perturbed MAP solutions.
MarginalVector logistic_marginals(const SubmodularMixture& f, int num_samples,
                                  std::uint64_t seed);

}  // namespace lsm

#endif
