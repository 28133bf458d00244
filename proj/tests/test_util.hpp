#ifndef LSM_TESTS_TEST_UTIL_HPP
#define LSM_TESTS_TEST_UTIL_HPP

// Test-side instance generators and independent oracles. Everything here
// deliberately avoids the production solver paths it is used to check.

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <vector>

#include "lsm/numeric.hpp"
#include "lsm/rng.hpp"
#include "lsm/submodular.hpp"

namespace lsm::testing {

inline CutFunction random_cut(int dim, SplitMix64& g, double edge_prob = 0.5,
                              double w_max = 2.0) {
  std::vector<CutFunction::Edge> edges;
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j)
      if (g.uniform01() < edge_prob)
        edges.push_back({i, j, w_max * g.uniform01()});
  return CutFunction(dim, std::move(edges));
}

inline SubmodularMixture random_cut_mixture(int dim, SplitMix64& g,
                                            double t_scale = 1.0,
                                            int num_bases = 2) {
  std::vector<SetFunctionPtr> fs;
  std::vector<double> alpha;
  for (int k = 0; k < num_bases; ++k) {
    fs.push_back(std::make_shared<CutFunction>(random_cut(dim, g)));
    alpha.push_back(g.uniform01());
  }
  std::vector<double> t(static_cast<std::size_t>(dim));
  for (auto& v : t) v = t_scale * (2.0 * g.uniform01() - 1.0);
  return SubmodularMixture(std::move(fs), std::move(alpha), std::move(t));
}

// Exact marginals P(x_d = 1) by full enumeration, D <= 20.
inline std::vector<double> enum_marginals(const SetFunction& f) {
  const int dim = f.dim();
  LogSumExp z_all;
  std::vector<LogSumExp> z_on(static_cast<std::size_t>(dim));
  const std::uint32_t n = 1u << dim;
  for (std::uint32_t mask = 0; mask < n; ++mask) {
    const BinaryVector x = vector_from_mask(mask, dim);
    const double v = -f.eval(x);
    z_all.add(v);
    for (int d = 0; d < dim; ++d)
      if (x[d]) z_on[d].add(v);
  }
  std::vector<double> mu(static_cast<std::size_t>(dim));
  for (int d = 0; d < dim; ++d) mu[d] = std::exp(z_on[d].value() - z_all.value());
  return mu;
}

// Every vertex of B(f) reachable by the greedy algorithm, over all D!
// orderings. D <= 6.
inline std::vector<std::vector<double>> all_greedy_vertices(const SetFunction& f) {
  const int dim = f.dim();
  std::vector<int> order(static_cast<std::size_t>(dim));
  std::iota(order.begin(), order.end(), 0);
  std::vector<std::vector<double>> vertices;
  do {
    std::vector<double> s(static_cast<std::size_t>(dim));
    BinaryVector x(static_cast<std::size_t>(dim), 0);
    double prev = 0;
    for (int idx : order) {
      x[idx] = 1;
      const double cur = f.eval(x);
      s[idx] = cur - prev;
      prev = cur;
    }
    vertices.push_back(std::move(s));
  } while (std::next_permutation(order.begin(), order.end()));
  return vertices;
}

// Independent min-norm oracle: Frank-Wolfe with away steps and exact line
// search on min ||s||^2 over B(f). Uses only the greedy linear oracle.
inline std::vector<double> fw_min_norm(const SetFunction& f, int max_iters = 10000,
                                       double gap_tol = 1e-12) {
  const int dim = f.dim();
  std::vector<std::vector<double>> atoms;
  std::vector<double> weights;
  {
    std::vector<double> w(static_cast<std::size_t>(dim), 0.0);
    atoms.push_back(greedy_base_vertex(f, w).s);
    weights.push_back(1.0);
  }
  std::vector<double> s = atoms[0];

  for (int it = 0; it < max_iters; ++it) {
    // forward atom: minimize <s, v> over B(f) = greedy on -s
    std::vector<double> neg(s.size());
    for (std::size_t d = 0; d < s.size(); ++d) neg[d] = -s[d];
    std::vector<double> fw = greedy_base_vertex(f, neg).s;

    // away atom: the active atom with the largest <s, v>
    std::size_t away = 0;
    double away_dot = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < atoms.size(); ++a) {
      if (weights[a] <= 0) continue;
      const double dp = dot(s, atoms[a]);
      if (dp > away_dot) {
        away_dot = dp;
        away = a;
      }
    }
    const double fw_gain = dot(s, s) - dot(s, fw);    // FW gap
    const double away_gain = away_dot - dot(s, s);
    if (fw_gain <= gap_tol && away_gain <= gap_tol) break;

    std::vector<double> dir(s.size());
    double gamma_max;
    bool is_away = away_gain > fw_gain;
    if (is_away) {
      for (std::size_t d = 0; d < s.size(); ++d) dir[d] = s[d] - atoms[away][d];
      const double wa = weights[away];
      gamma_max = wa / (1.0 - wa);
      if (!(gamma_max > 0)) is_away = false;
    }
    if (!is_away) {
      for (std::size_t d = 0; d < s.size(); ++d) dir[d] = fw[d] - s[d];
      gamma_max = 1.0;
    }
    const double denom = dot(dir, dir);
    if (denom <= 0) break;
    const double gamma = std::clamp(-dot(s, dir) / denom, 0.0, gamma_max);
    if (gamma <= 0) break;

    if (is_away) {
      for (auto& w : weights) w *= (1.0 + gamma);
      weights[away] -= gamma;
    } else {
      bool found = false;
      for (std::size_t a = 0; a < atoms.size(); ++a) {
        if (atoms[a] == fw) {
          found = true;
          for (auto& w : weights) w *= (1.0 - gamma);
          weights[a] += gamma;
          break;
        }
      }
      if (!found) {
        for (auto& w : weights) w *= (1.0 - gamma);
        atoms.push_back(fw);
        weights.push_back(gamma);
      }
    }
    for (std::size_t d = 0; d < s.size(); ++d) s[d] += gamma * dir[d];
  }
  return s;
}

inline double linf_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace lsm::testing

#endif
