#ifndef LSM_LEARNING_HPP
#define LSM_LEARNING_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "lsm/submodular.hpp"

namespace lsm {

struct SufficientStats {
  std::vector<double> mean_fk;  // <f_k(x)> over the data
  std::vector<double> mean_x;   // <x> over the data, entries in [0,1]
  int n_samples = 0;
};

SufficientStats compute_stats(const std::vector<BinaryVector>& data,
                              const std::vector<SetFunctionPtr>& base_functions);

// State of one projected stochastic subgradient run. alpha stays >= 0 after
// every step; averages run over the post-update iterates.
struct TrainState {
  std::vector<double> alpha;
  std::vector<double> t;
  double u = 0;  // shared noise logit, log(pi/(1-pi))
  long long h = 0;
  std::vector<double> alpha_avg;
  std::vector<double> t_avg;
  double u_avg = 0;
  std::uint64_t seed = 0;
  double step_c = 1.0;
  double reg_alpha = 0;
  double reg_t = 0;
};

TrainState make_train_state(int num_bases, int dim, std::uint64_t seed,
                            double step_c = 1.0, double reg_alpha = 0,
                            double reg_t = 0);

// avg <- avg + (value - avg) / count_after, the plain running mean.
void update_running_average(std::vector<double>& avg,
                            const std::vector<double>& value,
                            long long count_after);

// One iteration of stochastic subgradient on the logistic-bound ML objective:
// a single perturbed MAP call, then
//   t      <- t - C/sqrt(h) [y* - <x> + reg_t * t]
//   alpha  <- (alpha - C/sqrt(h) [<f_k> - f_k(y*) + reg_alpha * alpha])_+
void sgd_ml_step(TrainState& state, const SufficientStats& stats,
                 const std::vector<SetFunctionPtr>& base_functions);

struct NoisyPair {
  std::optional<BinaryVector> clean;
  BinaryVector noisy;
};

// Exact ML estimate of the shared flip probability from observed pairs,
// returned as a logit clamped to +-30.
double estimate_flip_logit(const std::vector<NoisyPair>& pairs);

// One iteration of conditional ML: picks a random pair, perturbs, and solves
// the conditional model f + u(2z-1)'x. Per-sample statistics replace the
// dataset means. state.u must hold the (pre-estimated) noise logit.
void conditional_sgd_step(TrainState& state, const std::vector<NoisyPair>& pairs,
                          const std::vector<SetFunctionPtr>& base_functions);

// One iteration on the latent objective
//   A(f) - A(f + u(2z-1)'x) - u z'1 + D log(1+e^u),
// a difference of two logistic bounds: two independent perturbations, one MAP
// per bound. Optionally follows the u subgradient as well.
void latent_sgd_step(TrainState& state, const std::vector<BinaryVector>& noisy,
                     const std::vector<SetFunctionPtr>& base_functions,
                     bool learn_u);

struct ModelParams {
  std::vector<double> alpha;
  std::vector<double> t;
  double u = 0;
};

// Averaged iterates, not the last ones. Throws if no step was taken.
ModelParams finalize(const TrainState& state);

struct LfieldDiagnostic {
  // Jensen gaps <f_k> - f_k^Lovasz(<x>); each >= 0, so L-field ML zeroes alpha.
  std::vector<double> jensen_gap;
  // Closed-form t at the degenerate solution: logit(<x>), clamped.
  std::vector<double> t_closed_form;
};

LfieldDiagnostic lfield_ml_diagnostic(const SufficientStats& stats,
                                      const std::vector<SetFunctionPtr>& base_functions);

// Projected gradient on the reduced (linear) L-field ML objective; shows the
// degeneracy by driving alpha to zero.
std::vector<double> lfield_ml_projected_gradient(
    const SufficientStats& stats,
    const std::vector<SetFunctionPtr>& base_functions,
    std::vector<double> alpha0, double step, int iterations);

struct Estimate {
  double value = 0;
  double std_error = 0;
};

// Monte-Carlo estimate of the ML objective at (alpha, t) on a fixed batch of
// logistic vectors; reusing one batch across calls gives common random
// numbers for comparisons.
Estimate ml_objective_estimate(const SufficientStats& stats,
                               const std::vector<SetFunctionPtr>& base_functions,
                               const std::vector<double>& alpha,
                               const std::vector<double>& t,
                               const std::vector<std::vector<double>>& z_batch);

struct Checkpoint {
  ModelParams params;
  long long h = 0;
  std::uint64_t seed = 0;
};

// Plain-text key/value checkpoint; doubles print with 17 significant digits
// and round-trip bit-exactly.
void save_checkpoint(const Checkpoint& c, std::ostream& out);
Checkpoint load_checkpoint(std::istream& in);

}  // namespace lsm

#endif
