// Command-line front end. Exit codes: 0 success, 2 usage error, 3 data
// error, 4 numerical failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lsm/errors.hpp"
#include "lsm/experiments.hpp"
#include "lsm/learning.hpp"

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CliOptions {
  lsm::ExperimentConfig cfg;
  std::string config_path;
  std::string checkpoint;
  std::string grid = "20x20";
};

void parse_grid(const std::string& text, int& height, int& width) {
  const auto x = text.find('x');
  std::size_t h_end = 0, w_end = 0;
  try {
    if (x == std::string::npos) throw std::invalid_argument("");
    height = std::stoi(text.substr(0, x), &h_end);
    width = std::stoi(text.substr(x + 1), &w_end);
  } catch (const std::exception&) {
    throw UsageError("malformed grid value '" + text + "', expected HxW");
  }
  if (h_end != x || w_end != text.size() - x - 1 || height < 1 || width < 1)
    throw UsageError("malformed grid value '" + text + "', expected HxW");
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  std::istringstream in(text);
  T v{};
  std::string rest;
  if (!(in >> v) || (in >> rest))
    throw UsageError("malformed value for " + key + ": '" + text + "'");
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "1" || text == "true") return true;
  if (text == "0" || text == "false") return false;
  throw UsageError("malformed value for " + key + ": '" + text + "'");
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// One row per flag: config-file key, setter from text, echo of the resolved
// value. Key names equal the long flag names without the leading dashes.
struct KeyBinding {
  std::string key;
  std::function<void(const std::string&)> apply;
  std::function<std::string()> echo;
};

std::vector<KeyBinding> key_bindings(CliOptions& o) {
  auto& c = o.cfg;
  return {
      {"seed", [&](const std::string& v) { c.seed = parse_number<std::uint64_t>("seed", v); },
       [&] { return std::to_string(c.seed); }},
      {"grid", [&](const std::string& v) { o.grid = v; },
       [&] { return o.grid; }},
      {"noise", [&](const std::string& v) { c.noise_pi = parse_number<double>("noise", v); },
       [&] { return fmt17(c.noise_pi); }},
      {"samples", [&](const std::string& v) { c.num_samples = parse_number<int>("samples", v); },
       [&] { return std::to_string(c.num_samples); }},
      {"iters", [&](const std::string& v) { c.iters = parse_number<long long>("iters", v); },
       [&] { return std::to_string(c.iters); }},
      {"step", [&](const std::string& v) { c.step_c = parse_number<double>("step", v); },
       [&] { return fmt17(c.step_c); }},
      {"reg-alpha", [&](const std::string& v) { c.reg_alpha = parse_number<double>("reg-alpha", v); },
       [&] { return fmt17(c.reg_alpha); }},
      {"reg-t", [&](const std::string& v) { c.reg_t = parse_number<double>("reg-t", v); },
       [&] { return fmt17(c.reg_t); }},
      {"n-train", [&](const std::string& v) { c.n_train = parse_number<int>("n-train", v); },
       [&] { return std::to_string(c.n_train); }},
      {"n-test", [&](const std::string& v) { c.n_test = parse_number<int>("n-test", v); },
       [&] { return std::to_string(c.n_test); }},
      {"n-points", [&](const std::string& v) { c.n_points = parse_number<int>("n-points", v); },
       [&] { return std::to_string(c.n_points); }},
      {"c-scale", [&](const std::string& v) { c.c_scale = parse_number<double>("c-scale", v); },
       [&] { return fmt17(c.c_scale); }},
      {"k-max", [&](const std::string& v) { c.k_max = parse_number<int>("k-max", v); },
       [&] { return std::to_string(c.k_max); }},
      {"repeats", [&](const std::string& v) { c.repeats = parse_number<int>("repeats", v); },
       [&] { return std::to_string(c.repeats); }},
      {"known-pi", [&](const std::string& v) { c.known_pi = parse_bool("known-pi", v); },
       [&] { return std::string(c.known_pi ? "1" : "0"); }},
      {"images", [&](const std::string& v) { c.images_dir = v; },
       [&] { return c.images_dir; }},
      {"checkpoint", [&](const std::string& v) { o.checkpoint = v; },
       [&] { return o.checkpoint; }},
      {"out", [&](const std::string& v) { c.out_dir = v; },
       [&] { return c.out_dir; }},
  };
}

// key=value lines with # comments; values already set on the command line
// take precedence over the file.
void apply_config_file(CliOptions& o, const CLI::App& sub) {
  std::ifstream in(o.config_path);
  if (!in) throw lsm::DataError("cannot open config file " + o.config_path);
  auto bindings = key_bindings(o);
  auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    const auto b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  };
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError("config line " + std::to_string(line_no) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    bool known = false;
    for (auto& b : bindings) {
      if (b.key != key) continue;
      known = true;
      const std::string flag = "--" + key;
      const auto* opt = sub.get_option_no_throw(flag);
      if (opt == nullptr || opt->count() == 0) b.apply(value);
      break;
    }
    if (!known) throw UsageError("config file: unknown key '" + key + "'");
  }
}

void write_resolved_config(CliOptions& o, const std::string& subcommand) {
  namespace fs = std::filesystem;
  fs::create_directories(o.cfg.out_dir);
  std::ofstream out(fs::path(o.cfg.out_dir) / "resolved_config.txt");
  if (!out) throw lsm::DataError("cannot write resolved config");
  out << "# subcommand: " << subcommand << '\n';
  for (const auto& b : key_bindings(o)) out << b.key << '=' << b.echo() << '\n';
}

void add_common_options(CLI::App* sub, CliOptions& o) {
  sub->add_option("--config", o.config_path, "key=value config file");
  sub->add_option("--seed", o.cfg.seed, "RNG seed");
  sub->add_option("--grid", o.grid, "image grid, HxW");
  sub->add_option("--noise", o.cfg.noise_pi, "flip probability");
  sub->add_option("--samples", o.cfg.num_samples, "logistic sample count M");
  sub->add_option("--iters", o.cfg.iters, "SGD iterations H");
  sub->add_option("--step", o.cfg.step_c, "SGD step constant C");
  sub->add_option("--reg-alpha", o.cfg.reg_alpha, "l2 weight on alpha");
  sub->add_option("--reg-t", o.cfg.reg_t, "l2 weight on t");
  sub->add_option("--n-train", o.cfg.n_train, "training images");
  sub->add_option("--n-test", o.cfg.n_test, "test images");
  sub->add_option("--n-points", o.cfg.n_points, "points per cluster");
  sub->add_option("--c-scale", o.cfg.c_scale, "graph weight scale c");
  sub->add_option("--k-max", o.cfg.k_max, "largest conditioning k (0 = n-points)");
  sub->add_option("--repeats", o.cfg.repeats, "bound-comparison repetitions");
  sub->add_flag("--known-pi,!--no-known-pi", o.cfg.known_pi,
                "treat the noise level as known");
  sub->add_option("--images", o.cfg.images_dir, "directory of P1 PBM images");
  sub->add_option("--checkpoint", o.checkpoint, "model checkpoint to decode with");
  sub->add_option("--out", o.cfg.out_dir, "output directory");
}

int dispatch(const std::string& name, CliOptions& o) {
  parse_grid(o.grid, o.cfg.height, o.cfg.width);
  write_resolved_config(o, name);
  namespace fs = std::filesystem;
  const fs::path out_dir(o.cfg.out_dir);

  if (name == "bounds") {
    const auto rows = lsm::bound_comparison(o.cfg);
    lsm::emit_bounds_outputs(o.cfg, rows);
    std::cout << "wrote " << rows.size() << " rows to "
              << (out_dir / "bounds_raw.csv").string() << '\n';
    return 0;
  }
  if (name == "train-supervised" || name == "train-unsupervised") {
    const lsm::PipelineRun run =
        name == "train-supervised"
            ? lsm::run_supervised(o.cfg)
            : lsm::run_unsupervised(o.cfg, o.cfg.known_pi);
    lsm::emit_pipeline_outputs(o.cfg, run);
    std::cout << "map error " << lsm::mean_of(run.report.map_errors)
              << ", mean-marginal error " << lsm::mean_of(run.report.mm_errors)
              << ", noisy baseline " << lsm::mean_of(run.report.noisy_errors)
              << '\n';
    std::cout << "checkpoint: " << (out_dir / "checkpoint.txt").string() << '\n';
    return 0;
  }
  if (name == "denoise") {
    if (o.checkpoint.empty())
      throw UsageError("denoise requires --checkpoint");
    std::ifstream in(o.checkpoint);
    if (!in) throw lsm::DataError("cannot open checkpoint " + o.checkpoint);
    const lsm::Checkpoint ckpt = lsm::load_checkpoint(in);
    const lsm::PipelineRun run = lsm::run_denoise(o.cfg, ckpt.params);
    lsm::emit_pipeline_outputs(o.cfg, run);
    std::cout << "map error " << lsm::mean_of(run.report.map_errors)
              << ", mean-marginal error " << lsm::mean_of(run.report.mm_errors)
              << '\n';
    return 0;
  }
  // selftest
  const int failed = lsm::selftest(std::cout);
  return failed == 0 ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"log-supermodular models: partition-function bounds, maximum-"
               "likelihood learning, binary image denoising"};
  app.require_subcommand(1);
  CliOptions options;

  const char* names[] = {"bounds", "train-supervised", "train-unsupervised",
                         "denoise", "selftest"};
  const char* descriptions[] = {
      "compare log-partition bounds on conditioned graph-cut models",
      "conditional ML on clean/noisy pairs, then decode the test split",
      "latent ML on noisy images only, then decode the test split",
      "decode the test split with a saved checkpoint",
      "run the built-in invariant suites"};
  for (int i = 0; i < 5; ++i)
    add_common_options(app.add_subcommand(names[i], descriptions[i]), options);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    if (!options.config_path.empty()) apply_config_file(options, *sub);
    return dispatch(sub->get_name(), options);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const lsm::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
}
