#ifndef LSM_EXPERIMENTS_HPP
#define LSM_EXPERIMENTS_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "lsm/learning.hpp"
#include "lsm/pbm.hpp"
#include "lsm/submodular.hpp"

namespace lsm {

struct ExperimentConfig {
  std::uint64_t seed = 1;
  int height = 20;
  int width = 20;
  double noise_pi = 0.1;
  int n_train = 30;
  int n_test = 30;
  int num_samples = 100;   // M, logistic samples for bounds / mean-marginals
  long long iters = 20000; // H, SGD budget
  double step_c = 1.0;
  double reg_alpha = 1e-2;
  double reg_t = 1e-2;
  int n_points = 5;    // points per cluster in the bound-comparison graphs
  double c_scale = 1.0;
  int k_max = 0;       // 0 means condition up to n_points
  int repeats = 10;    // seeds for the bound comparison
  bool known_pi = true;
  std::string images_dir;  // PBM dataset; empty -> synthetic shapes
  std::string out_dir = "out";

  int dim() const { return height * width; }
  void validate() const;  // throws DataError
};

// Complete graph on 2n Gaussian points (n per cluster, centers (3,3) and
// (-3,-3)), edge weight exp(-c * distance). Cluster 0 occupies nodes 0..n-1.
CutFunction gen_mixture_graph(int n_per_cluster, double c_scale,
                              std::uint64_t seed);

struct BoundRow {
  int instance_id = 0;
  int k_conditioned = 0;
  double exact = 0;  // NaN when the free dimension is too large
  double lfield = 0;
  double logistic_mean = 0;
  double logistic_se = 0;
  double superdiff_lower = 0;
};

// For each seed repetition and k = 1..n: fix k designated points of cluster 0
// to side 0 and k of cluster 1 to side 1, then evaluate every bound on the
// conditioned model.
std::vector<BoundRow> bound_comparison(const ExperimentConfig& config);

void write_bounds_csv(const std::vector<BoundRow>& rows, std::ostream& out);
// Per-k mean and std over repetitions, for each bound.
void write_bounds_summary_csv(const std::vector<BoundRow>& rows, std::ostream& out);

// Test shapes: filled rectangles and ellipses, one connected component,
// at least one foreground pixel. Deterministic per seed.
std::vector<BinaryVector> gen_shapes(int count, int height, int width,
                                     std::uint64_t seed);
BinaryVector make_rectangle(int height, int width, int r0, int c0, int r1, int c1);
BinaryVector make_ellipse(int height, int width, double cr, double cc,
                          double ra, double rb);

// Each bit flipped independently with probability pi.
BinaryVector flip_noise(const BinaryVector& x, double pi, std::uint64_t seed);

// Unit-weight cuts over horizontal / vertical grid neighbors (row-major).
std::pair<CutFunction, CutFunction> grid_cut_functions(int height, int width);

// MAP decode: argmin f(x) + u(2z-1)'x via a single graph cut.
BinaryVector denoise_map(const ModelParams& params,
                         const std::vector<SetFunctionPtr>& base_functions,
                         const BinaryVector& z);

// Mean-marginal decode: logistic marginals of the conditional model,
// thresholded at 1/2; exact ties fall back to the observed bit.
BinaryVector denoise_mean_marginals(const ModelParams& params,
                                    const std::vector<SetFunctionPtr>& base_functions,
                                    const BinaryVector& z, int num_samples,
                                    std::uint64_t seed);

// Normalized Hamming distance, |{d : a_d != b_d}| / D.
double hamming_error(const BinaryVector& a, const BinaryVector& b);

struct DenoiseReport {
  std::vector<double> map_errors;
  std::vector<double> mm_errors;
  std::vector<double> noisy_errors;
};

struct PipelineRun {
  ModelParams params;
  long long steps = 0;
  std::uint64_t seed = 0;
  int height = 0;
  int width = 0;
  DenoiseReport report;
  std::vector<BinaryVector> test_clean;
  std::vector<BinaryVector> test_noisy;
  std::vector<BinaryVector> test_map;
  std::vector<BinaryVector> test_mm;
};

// Full supervised pipeline: data, noise, closed-form u, conditional SGD,
// decoding of the test split both ways.
PipelineRun run_supervised(const ExperimentConfig& config);

// Latent pipeline: trains on noisy images only (warm start treats them as
// clean), with u fixed at logit(pi) when known_pi, else learned.
PipelineRun run_unsupervised(const ExperimentConfig& config, bool known_pi);

// Decode-only pipeline: same data and test split as the training runs, with
// parameters supplied from a checkpoint.
PipelineRun run_denoise(const ExperimentConfig& config, const ModelParams& params);

void write_denoise_report_csv(const ExperimentConfig& config,
                              const DenoiseReport& report, std::ostream& out);
void write_per_image_csv(const DenoiseReport& report, std::ostream& out);

// Writes report.csv, per_image.csv, checkpoint.txt and the test images
// (clean/noisy/map/mm PBM files) under config.out_dir.
void emit_pipeline_outputs(const ExperimentConfig& config, const PipelineRun& run);
void emit_bounds_outputs(const ExperimentConfig& config,
                         const std::vector<BoundRow>& rows);

// Small fixed-seed invariant suites; prints one line per suite and a summary.
// Returns the number of failed suites.
int selftest(std::ostream& out);

}  // namespace lsm

#endif
