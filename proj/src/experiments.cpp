#include "lsm/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <stdexcept>

#include "lsm/bounds.hpp"
#include "lsm/errors.hpp"
#include "lsm/numeric.hpp"
#include "lsm/rng.hpp"
#include "lsm/sfm.hpp"

namespace lsm {

namespace {

// Stream tags for deriving independent sub-seeds from the experiment seed.
constexpr std::uint64_t kShapesStream = 1;
constexpr std::uint64_t kTrainNoiseStream = 2;
constexpr std::uint64_t kTestNoiseStream = 3;
constexpr std::uint64_t kTrainStream = 4;
constexpr std::uint64_t kDecodeStream = 5;
constexpr std::uint64_t kWarmStream = 6;
constexpr std::uint64_t kGraphStream = 7;
constexpr std::uint64_t kBoundSampleStream = 8;

std::string fmt6(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (height < 1 || width < 1) throw std::invalid_argument("degenerate grid");
  if (!(noise_pi >= 0.0 && noise_pi <= 0.5))
    throw std::invalid_argument("noise must lie in [0, 0.5]");
  if (n_train < 1 || n_test < 1 || num_samples < 1 || iters < 1 ||
      repeats < 1 || n_points < 1)
    throw std::invalid_argument("counts must be >= 1");
  if (!(step_c > 0)) throw std::invalid_argument("step constant must be > 0");
  if (reg_alpha < 0 || reg_t < 0) throw std::invalid_argument("negative regularizer");
  if (k_max < 0) throw std::invalid_argument("negative k-max");
  if (!(c_scale >= 0)) throw std::invalid_argument("negative c-scale");
}

CutFunction gen_mixture_graph(int n_per_cluster, double c_scale,
                              std::uint64_t seed) {
  if (n_per_cluster < 1) throw std::invalid_argument("need n >= 1 points per cluster");
  GaussianStream gauss(seed);
  const int n = 2 * n_per_cluster;
  std::vector<double> px(static_cast<std::size_t>(n)), py(px);
  for (int i = 0; i < n; ++i) {
    const double cx = i < n_per_cluster ? 3.0 : -3.0;
    px[i] = cx + gauss.next();
    py[i] = cx + gauss.next();  // both cluster centers sit on the diagonal
  }
  std::vector<CutFunction::Edge> edges;
  edges.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double dist = std::hypot(px[i] - px[j], py[i] - py[j]);
      edges.push_back({i, j, std::exp(-c_scale * dist)});
    }
  return CutFunction(n, std::move(edges));
}

std::vector<BoundRow> bound_comparison(const ExperimentConfig& config) {
  config.validate();
  const int n = config.n_points;
  const int k_hi = config.k_max > 0 ? std::min(config.k_max, n) : n;
  std::vector<BoundRow> rows;
  for (int rep = 0; rep < config.repeats; ++rep) {
    auto cut = std::make_shared<CutFunction>(gen_mixture_graph(
        n, config.c_scale, derive_seed(derive_seed(config.seed, kGraphStream), rep)));
    const SubmodularMixture model({cut}, {1.0},
                                  std::vector<double>(static_cast<std::size_t>(2 * n), 0.0));
    for (int k = 1; k <= k_hi; ++k) {
      std::vector<int> assignment(static_cast<std::size_t>(2 * n), -1);
      for (int i = 0; i < k; ++i) {
        assignment[i] = 0;      // designated points of cluster 0
        assignment[n + i] = 1;  // designated points of cluster 1
      }
      const SubmodularMixture cond = condition(model, assignment);
      BoundRow row;
      row.instance_id = rep;
      row.k_conditioned = k;
      row.exact = cond.dim() <= 20 ? exact_log_partition(cond).value
                                   : std::nan("");
      row.lfield = lfield_bound(cond).value;
      const BoundResult lg = logistic_bound(
          cond, config.num_samples,
          derive_seed(derive_seed(config.seed, kBoundSampleStream),
                      static_cast<std::uint64_t>(rep) * 1000 + k));
      row.logistic_mean = lg.value;
      row.logistic_se = *lg.std_error;
      row.superdiff_lower = superdiff_lower_bound(cond).value;
      rows.push_back(row);
    }
  }
  return rows;
}

void write_bounds_csv(const std::vector<BoundRow>& rows, std::ostream& out) {
  out << "instance_id,k_conditioned,exact,lfield,logistic_mean,logistic_se,"
         "superdiff_lower\n";
  for (const auto& r : rows)
    out << r.instance_id << ',' << r.k_conditioned << ',' << fmt6(r.exact)
        << ',' << fmt6(r.lfield) << ',' << fmt6(r.logistic_mean) << ','
        << fmt6(r.logistic_se) << ',' << fmt6(r.superdiff_lower) << '\n';
}

void write_bounds_summary_csv(const std::vector<BoundRow>& rows, std::ostream& out) {
  std::map<int, std::vector<const BoundRow*>> by_k;
  for (const auto& r : rows) by_k[r.k_conditioned].push_back(&r);
  out << "k_conditioned,exact_mean,exact_std,lfield_mean,lfield_std,"
         "logistic_mean,logistic_std,superdiff_mean,superdiff_std\n";
  for (const auto& [k, group] : by_k) {
    auto column = [&group](double BoundRow::* field) {
      std::vector<double> v;
      v.reserve(group.size());
      for (const auto* r : group) v.push_back(r->*field);
      return v;
    };
    const auto ex = column(&BoundRow::exact);
    const auto lf = column(&BoundRow::lfield);
    const auto lg = column(&BoundRow::logistic_mean);
    const auto sd = column(&BoundRow::superdiff_lower);
    out << k << ',' << fmt6(mean_of(ex)) << ',' << fmt6(stddev_of(ex)) << ','
        << fmt6(mean_of(lf)) << ',' << fmt6(stddev_of(lf)) << ','
        << fmt6(mean_of(lg)) << ',' << fmt6(stddev_of(lg)) << ','
        << fmt6(mean_of(sd)) << ',' << fmt6(stddev_of(sd)) << '\n';
  }
}

BinaryVector make_rectangle(int height, int width, int r0, int c0, int r1, int c1) {
  if (r0 < 0 || c0 < 0 || r1 >= height || c1 >= width || r0 > r1 || c0 > c1)
    throw std::invalid_argument("rectangle out of range");
  BinaryVector x(static_cast<std::size_t>(height) * width, 0);
  for (int r = r0; r <= r1; ++r)
    for (int c = c0; c <= c1; ++c) x[static_cast<std::size_t>(r) * width + c] = 1;
  return x;
}

BinaryVector make_ellipse(int height, int width, double cr, double cc,
                          double ra, double rb) {
  if (ra < 1.0 || rb < 1.0) throw std::invalid_argument("ellipse too small");
  BinaryVector x(static_cast<std::size_t>(height) * width, 0);
  for (int r = 0; r < height; ++r)
    for (int c = 0; c < width; ++c) {
      const double dr = (r - cr) / ra;
      const double dc = (c - cc) / rb;
      if (dr * dr + dc * dc <= 1.0)
        x[static_cast<std::size_t>(r) * width + c] = 1;
    }
  return x;
}

std::vector<BinaryVector> gen_shapes(int count, int height, int width,
                                     std::uint64_t seed) {
  if (height < 1 || width < 1) throw std::invalid_argument("degenerate grid");
  if (count < 0) throw std::invalid_argument("negative count");
  std::vector<BinaryVector> shapes;
  shapes.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    SplitMix64 g(derive_seed(seed, static_cast<std::uint64_t>(i)));
    if (height >= 4 && width >= 4 && (g.next() & 1u)) {
      const double ra = std::max(1.0, (0.15 + 0.20 * g.uniform01()) * height);
      const double rb = std::max(1.0, (0.15 + 0.20 * g.uniform01()) * width);
      const double cr = ra + g.uniform01() * std::max(0.0, height - 1 - 2 * ra);
      const double cc = rb + g.uniform01() * std::max(0.0, width - 1 - 2 * rb);
      shapes.push_back(make_ellipse(height, width, cr, cc, ra, rb));
    } else {
      const int rh = 1 + std::min<int>(height - 1,
                                       static_cast<int>((0.3 + 0.6 * g.uniform01()) * height));
      const int rw = 1 + std::min<int>(width - 1,
                                       static_cast<int>((0.3 + 0.6 * g.uniform01()) * width));
      const int r0 = static_cast<int>(g.uniform01() * (height - rh + 1));
      const int c0 = static_cast<int>(g.uniform01() * (width - rw + 1));
      shapes.push_back(make_rectangle(height, width, r0, c0, r0 + rh - 1, c0 + rw - 1));
    }
  }
  return shapes;
}

BinaryVector flip_noise(const BinaryVector& x, double pi, std::uint64_t seed) {
  if (!(pi >= 0.0 && pi <= 1.0)) throw std::invalid_argument("pi outside [0,1]");
  SplitMix64 g(seed);
  BinaryVector z = x;
  for (auto& b : z)
    if (g.uniform01() < pi) b ^= 1u;
  return z;
}

std::pair<CutFunction, CutFunction> grid_cut_functions(int height, int width) {
  if (height < 1 || width < 1) throw std::invalid_argument("degenerate grid");
  const int dim = height * width;
  std::vector<CutFunction::Edge> horizontal, vertical;
  for (int r = 0; r < height; ++r)
    for (int c = 0; c + 1 < width; ++c)
      horizontal.push_back({r * width + c, r * width + c + 1, 1.0});
  for (int r = 0; r + 1 < height; ++r)
    for (int c = 0; c < width; ++c)
      vertical.push_back({r * width + c, (r + 1) * width + c, 1.0});
  return {CutFunction(dim, std::move(horizontal)),
          CutFunction(dim, std::move(vertical))};
}

BinaryVector denoise_map(const ModelParams& params,
                         const std::vector<SetFunctionPtr>& base_functions,
                         const BinaryVector& z) {
  const std::size_t dim = z.size();
  if (params.t.size() != dim) throw std::invalid_argument("dimension mismatch");
  std::vector<double> extra(dim);
  for (std::size_t d = 0; d < dim; ++d)
    extra[d] = -params.u * (2.0 * z[d] - 1.0);
  const SubmodularMixture mix(base_functions, params.alpha, params.t);
  return minimize(mix, extra).argmin;
}

BinaryVector denoise_mean_marginals(const ModelParams& params,
                                    const std::vector<SetFunctionPtr>& base_functions,
                                    const BinaryVector& z, int num_samples,
                                    std::uint64_t seed) {
  const std::size_t dim = z.size();
  if (params.t.size() != dim) throw std::invalid_argument("dimension mismatch");
  std::vector<double> t_cond(dim);
  for (std::size_t d = 0; d < dim; ++d)
    t_cond[d] = params.t[d] - params.u * (2.0 * z[d] - 1.0);
  const SubmodularMixture cond(base_functions, params.alpha, t_cond);
  const MarginalVector mu = logistic_marginals(cond, num_samples, seed);
  BinaryVector out(dim);
  for (std::size_t d = 0; d < dim; ++d) {
    if (mu.mu[d] > 0.5)
      out[d] = 1;
    else if (mu.mu[d] < 0.5)
      out[d] = 0;
    else
      out[d] = z[d];
  }
  return out;
}

double hamming_error(const BinaryVector& a, const BinaryVector& b) {
  if (a.size() != b.size() || a.empty())
    throw std::invalid_argument("dimension mismatch");
  std::size_t diff = 0;
  for (std::size_t d = 0; d < a.size(); ++d) diff += a[d] != b[d];
  return static_cast<double>(diff) / static_cast<double>(a.size());
}

namespace {

struct Dataset {
  int height = 0;
  int width = 0;
  std::vector<BinaryVector> images;
};

Dataset load_or_generate(const ExperimentConfig& config) {
  Dataset data;
  const int needed = config.n_train + config.n_test;
  if (config.images_dir.empty()) {
    data.height = config.height;
    data.width = config.width;
    data.images = gen_shapes(needed, data.height, data.width,
                             derive_seed(config.seed, kShapesStream));
    return data;
  }
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(config.images_dir, ec))
    if (entry.path().extension() == ".pbm") files.push_back(entry.path());
  if (ec) throw DataError("cannot read image directory " + config.images_dir);
  std::sort(files.begin(), files.end());
  if (static_cast<int>(files.size()) < needed)
    throw DataError("image directory holds fewer than n-train + n-test images");
  for (int i = 0; i < needed; ++i) {
    const BinaryImage img = read_pbm_file(files[i].string());
    if (data.images.empty()) {
      data.height = img.height;
      data.width = img.width;
    } else if (img.height != data.height || img.width != data.width) {
      throw DataError("image sizes differ within " + config.images_dir);
    }
    data.images.push_back(img.pixels);
  }
  return data;
}

struct Problem {
  Dataset data;
  std::vector<SetFunctionPtr> bases;
  std::vector<BinaryVector> train_clean, train_noisy, test_clean, test_noisy;
};

Problem build_problem(const ExperimentConfig& config) {
  Problem p;
  p.data = load_or_generate(config);
  auto [fh, fv] = grid_cut_functions(p.data.height, p.data.width);
  p.bases = {std::make_shared<CutFunction>(std::move(fh)),
             std::make_shared<CutFunction>(std::move(fv))};
  const std::uint64_t train_noise = derive_seed(config.seed, kTrainNoiseStream);
  const std::uint64_t test_noise = derive_seed(config.seed, kTestNoiseStream);
  for (int i = 0; i < config.n_train; ++i) {
    p.train_clean.push_back(p.data.images[i]);
    p.train_noisy.push_back(
        flip_noise(p.train_clean.back(), config.noise_pi, derive_seed(train_noise, i)));
  }
  for (int i = 0; i < config.n_test; ++i) {
    p.test_clean.push_back(p.data.images[config.n_train + i]);
    p.test_noisy.push_back(
        flip_noise(p.test_clean.back(), config.noise_pi, derive_seed(test_noise, i)));
  }
  return p;
}

PipelineRun decode_test_split(const ExperimentConfig& config, const Problem& p,
                              const ModelParams& params, long long steps) {
  PipelineRun run;
  run.params = params;
  run.steps = steps;
  run.seed = config.seed;
  run.height = p.data.height;
  run.width = p.data.width;
  run.test_clean = p.test_clean;
  run.test_noisy = p.test_noisy;
  const std::uint64_t decode = derive_seed(config.seed, kDecodeStream);
  for (std::size_t i = 0; i < p.test_noisy.size(); ++i) {
    run.test_map.push_back(denoise_map(params, p.bases, p.test_noisy[i]));
    run.test_mm.push_back(denoise_mean_marginals(params, p.bases, p.test_noisy[i],
                                                 config.num_samples,
                                                 derive_seed(decode, i)));
    run.report.map_errors.push_back(hamming_error(run.test_map.back(), p.test_clean[i]));
    run.report.mm_errors.push_back(hamming_error(run.test_mm.back(), p.test_clean[i]));
    run.report.noisy_errors.push_back(hamming_error(p.test_noisy[i], p.test_clean[i]));
  }
  return run;
}

}  // namespace

PipelineRun run_supervised(const ExperimentConfig& config) {
  config.validate();
  const Problem p = build_problem(config);
  const int dim = p.data.height * p.data.width;

  std::vector<NoisyPair> pairs;
  pairs.reserve(p.train_clean.size());
  for (std::size_t i = 0; i < p.train_clean.size(); ++i)
    pairs.push_back({p.train_clean[i], p.train_noisy[i]});

  TrainState state = make_train_state(
      static_cast<int>(p.bases.size()), dim, derive_seed(config.seed, kTrainStream),
      config.step_c, config.reg_alpha, config.reg_t);
  state.u = estimate_flip_logit(pairs);
  for (long long it = 0; it < config.iters; ++it)
    conditional_sgd_step(state, pairs, p.bases);

  return decode_test_split(config, p, finalize(state), state.h);
}

PipelineRun run_unsupervised(const ExperimentConfig& config, bool known_pi) {
  config.validate();
  const Problem p = build_problem(config);
  const int dim = p.data.height * p.data.width;

  // warm start: plain ML treating the noisy images as clean
  TrainState warm = make_train_state(
      static_cast<int>(p.bases.size()), dim, derive_seed(config.seed, kWarmStream),
      config.step_c, config.reg_alpha, config.reg_t);
  const SufficientStats noisy_stats = compute_stats(p.train_noisy, p.bases);
  const long long warm_iters = std::max<long long>(1, config.iters / 10);
  for (long long it = 0; it < warm_iters; ++it)
    sgd_ml_step(warm, noisy_stats, p.bases);
  const ModelParams warm_params = finalize(warm);

  TrainState state = make_train_state(
      static_cast<int>(p.bases.size()), dim, derive_seed(config.seed, kTrainStream),
      config.step_c, config.reg_alpha, config.reg_t);
  state.alpha = warm_params.alpha;
  state.t = warm_params.t;
  state.u = known_pi ? clamped_logit(config.noise_pi) : clamped_logit(0.1);
  for (long long it = 0; it < config.iters; ++it)
    latent_sgd_step(state, p.train_noisy, p.bases, /*learn_u=*/!known_pi);

  return decode_test_split(config, p, finalize(state), state.h);
}

PipelineRun run_denoise(const ExperimentConfig& config, const ModelParams& params) {
  config.validate();
  const Problem p = build_problem(config);
  if (static_cast<int>(params.t.size()) != p.data.height * p.data.width)
    throw DataError("checkpoint dimension does not match the image grid");
  return decode_test_split(config, p, params, 0);
}

void write_denoise_report_csv(const ExperimentConfig& config,
                              const DenoiseReport& report, std::ostream& out) {
  out << "noise,decoder,mean,std\n";
  auto row = [&](const char* name, const std::vector<double>& errors) {
    out << fmt6(config.noise_pi) << ',' << name << ',' << fmt6(mean_of(errors))
        << ',' << fmt6(stddev_of(errors)) << '\n';
  };
  row("map", report.map_errors);
  row("mean_marginals", report.mm_errors);
  row("noisy", report.noisy_errors);
}

void write_per_image_csv(const DenoiseReport& report, std::ostream& out) {
  out << "image,map_error,mm_error,noisy_error\n";
  for (std::size_t i = 0; i < report.map_errors.size(); ++i)
    out << i << ',' << fmt6(report.map_errors[i]) << ','
        << fmt6(report.mm_errors[i]) << ',' << fmt6(report.noisy_errors[i]) << '\n';
}

namespace {

void write_image_file(const std::filesystem::path& path, int height, int width,
                      const BinaryVector& pixels) {
  BinaryImage img{height, width, pixels};
  write_pbm_file(img, path.string());
}

}  // namespace

void emit_pipeline_outputs(const ExperimentConfig& config, const PipelineRun& run) {
  namespace fs = std::filesystem;
  const fs::path out_dir(config.out_dir);
  fs::create_directories(out_dir);

  {
    std::ofstream out(out_dir / "checkpoint.txt");
    if (!out) throw DataError("cannot write checkpoint");
    save_checkpoint({run.params, run.steps, run.seed}, out);
  }
  {
    std::ofstream out(out_dir / "report.csv");
    write_denoise_report_csv(config, run.report, out);
  }
  {
    std::ofstream out(out_dir / "per_image.csv");
    write_per_image_csv(run.report, out);
  }
  const int h = run.height, w = run.width;
  char name[64];
  for (std::size_t i = 0; i < run.test_noisy.size(); ++i) {
    std::snprintf(name, sizeof(name), "clean_%03zu.pbm", i);
    write_image_file(out_dir / name, h, w, run.test_clean[i]);
    std::snprintf(name, sizeof(name), "noisy_%03zu.pbm", i);
    write_image_file(out_dir / name, h, w, run.test_noisy[i]);
    std::snprintf(name, sizeof(name), "map_%03zu.pbm", i);
    write_image_file(out_dir / name, h, w, run.test_map[i]);
    std::snprintf(name, sizeof(name), "mm_%03zu.pbm", i);
    write_image_file(out_dir / name, h, w, run.test_mm[i]);
  }
}

void emit_bounds_outputs(const ExperimentConfig& config,
                         const std::vector<BoundRow>& rows) {
  namespace fs = std::filesystem;
  const fs::path out_dir(config.out_dir);
  fs::create_directories(out_dir);
  {
    std::ofstream out(out_dir / "bounds_raw.csv");
    if (!out) throw DataError("cannot write bounds_raw.csv");
    write_bounds_csv(rows, out);
  }
  {
    std::ofstream out(out_dir / "bounds_summary.csv");
    write_bounds_summary_csv(rows, out);
  }
}

}  // namespace lsm
