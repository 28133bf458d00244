#include <cmath>
#include <memory>
#include <sstream>

#include <doctest.h>

#include "lsm/errors.hpp"
#include "lsm/submodular.hpp"
#include "test_util.hpp"

using namespace lsm;
using lsm::testing::random_cut;
using lsm::testing::random_cut_mixture;

namespace {

std::shared_ptr<CutFunction> unit_edge() {
  return std::make_shared<CutFunction>(2, std::vector<CutFunction::Edge>{{0, 1, 1.0}});
}

}  // namespace

TEST_CASE("cut evaluation") {
  const auto edge = unit_edge();
  CHECK(edge->eval({1, 0}) == doctest::Approx(1.0));
  CHECK(edge->eval({0, 0}) == 0.0);
  CHECK(edge->eval({1, 1}) == 0.0);

  // 2x2 grid, unit horizontal + vertical edges, checkerboard cuts all four
  const CutFunction grid(4, {{0, 1, 1.0}, {2, 3, 1.0}, {0, 2, 1.0}, {1, 3, 1.0}});
  CHECK(grid.eval({1, 0, 0, 1}) == doctest::Approx(4.0));

  CHECK_THROWS_AS(grid.eval({1, 0}), std::invalid_argument);
}

TEST_CASE("cut validation") {
  CHECK_THROWS_AS(CutFunction(2, {{0, 0, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(CutFunction(2, {{0, 1, -1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(CutFunction(2, {{0, 1, 1.0}, {0, 1, 2.0}}), std::invalid_argument);
  CHECK_THROWS_AS(CutFunction(2, {{0, 1, std::nan("")}}), std::invalid_argument);
}

TEST_CASE("mixture evaluation") {
  const auto edge = unit_edge();
  const SubmodularMixture m({edge}, {2.0}, {0.5, -0.5});
  CHECK(m.eval({1, 0}) == doctest::Approx(2.0 - 0.5));
  CHECK(m.eval({0, 0}) == 0.0);
  CHECK(m.eval({1, 1}) == doctest::Approx(0.0 - 0.5 + 0.5));
  CHECK_THROWS_AS(SubmodularMixture({edge}, {-1.0}, {0.0, 0.0}),
                  std::invalid_argument);
}

TEST_CASE("marginal gains") {
  const auto edge = unit_edge();
  CHECK(marginal_gain(*edge, {0, 0}, 0) == doctest::Approx(1.0));
  CHECK(marginal_gain(*edge, {0, 1}, 0) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(marginal_gain(*edge, {1, 0}, 0), std::invalid_argument);

  // diminishing returns on a random cut: second differences never positive
  SplitMix64 g(21);
  const CutFunction f = random_cut(8, g);
  for (std::uint32_t mask = 0; mask < 256; ++mask) {
    const BinaryVector x = vector_from_mask(mask, 8);
    for (int i = 0; i < 8; ++i) {
      if (x[i]) continue;
      for (int j = 0; j < 8; ++j) {
        if (j == i || x[j]) continue;
        BinaryVector xj = x;
        xj[j] = 1;
        CHECK(marginal_gain(f, xj, i) <= marginal_gain(f, x, i) + kSubTol);
      }
    }
  }
}

TEST_CASE("submodularity check") {
  SplitMix64 g(22);
  CHECK(is_submodular_bruteforce(random_cut(7, g)));

  // f({1}) = f({2}) = 0, f({1,2}) = 1: strictly supermodular
  const TabulatedFunction super(2, {0.0, 0.0, 0.0, 1.0});
  CHECK_FALSE(is_submodular_bruteforce(super));

  CHECK(is_submodular_bruteforce(random_cut_mixture(6, g)));

  const CutFunction big(13, {});
  CHECK_THROWS_AS(is_submodular_bruteforce(big), std::invalid_argument);
}

TEST_CASE("greedy base vertex") {
  const TabulatedFunction zero(3, std::vector<double>(8, 0.0));
  const BasePoint s0 = greedy_base_vertex(zero, {0.3, -0.1, 2.0});
  for (double v : s0.s) CHECK(v == 0.0);

  const auto edge = unit_edge();
  const BasePoint s = greedy_base_vertex(*edge, {2.0, 1.0});
  CHECK(s.s[0] == doctest::Approx(1.0));
  CHECK(s.s[1] == doctest::Approx(-1.0));

  SplitMix64 g(23);
  for (int rep = 0; rep < 20; ++rep) {
    const SubmodularMixture m = random_cut_mixture(8, g);
    std::vector<double> w(8);
    for (auto& v : w) v = 4.0 * g.uniform01() - 2.0;
    CHECK(in_base_polytope(m, greedy_base_vertex(m, w)));
  }
}

TEST_CASE("greedy tie-break is stable") {
  SplitMix64 g(24);
  const SubmodularMixture m = random_cut_mixture(6, g);
  const std::vector<double> w(6, 0.7);  // fully tied: chain order 0,1,2,...
  const BasePoint s = greedy_base_vertex(m, w);
  BinaryVector x(6, 0);
  double prev = 0;
  for (int d = 0; d < 6; ++d) {
    x[d] = 1;
    const double cur = m.eval(x);
    CHECK(s.s[d] == doctest::Approx(cur - prev).epsilon(1e-12));
    prev = cur;
  }
}

TEST_CASE("lovasz extension") {
  SplitMix64 g(25);
  const SubmodularMixture m = random_cut_mixture(8, g);
  for (std::uint32_t mask = 0; mask < 256; ++mask) {
    const BinaryVector x = vector_from_mask(mask, 8);
    const std::vector<double> w(x.begin(), x.end());
    CHECK(lovasz_extension(m, w) == doctest::Approx(m.eval(x)).epsilon(1e-12));
  }

  // symmetric cut at the cube center: positive homogeneity gives 0.5 f(1) = 0
  const CutFunction cut = random_cut(6, g);
  CHECK(lovasz_extension(cut, std::vector<double>(6, 0.5)) ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("support function dominates every greedy vertex") {
  SplitMix64 g(26);
  const SubmodularMixture m = random_cut_mixture(5, g);
  const auto vertices = lsm::testing::all_greedy_vertices(m);
  for (int rep = 0; rep < 10; ++rep) {
    std::vector<double> w(5);
    for (auto& v : w) v = 4.0 * g.uniform01() - 2.0;
    const double ext = lovasz_extension(m, w);
    for (const auto& v : vertices) CHECK(ext >= dot(w, v) - 1e-9);
  }
}

TEST_CASE("restrict and contract") {
  SplitMix64 g(27);
  const SubmodularMixture m = random_cut_mixture(6, g);

  // fixing nothing is the identity
  const auto same = restrict_and_contract(std::make_shared<SubmodularMixture>(m),
                                          std::vector<int>(6, -1));
  for (std::uint32_t mask = 0; mask < 64; ++mask) {
    const BinaryVector x = vector_from_mask(mask, 6);
    CHECK(same->eval(x) == doctest::Approx(m.eval(x)));
  }

  // unit edge with x_0 fixed to 1 becomes modular with slope -1
  const auto edge = unit_edge();
  const auto fixed = restrict_and_contract(edge, {1, -1});
  CHECK(fixed->dim() == 1);
  CHECK(fixed->eval({0}) == 0.0);
  CHECK(fixed->eval({1}) == doctest::Approx(-1.0));

  // conditioning preserves submodularity
  const SubmodularMixture m8 = random_cut_mixture(8, g);
  std::vector<int> assignment(8, -1);
  assignment[0] = 1;
  assignment[3] = 0;
  assignment[7] = 1;
  CHECK(is_submodular_bruteforce(*restrict_and_contract(
      std::make_shared<SubmodularMixture>(m8), assignment)));

  CHECK_THROWS_AS(restrict_and_contract(edge, {1, -1, 0}), std::invalid_argument);
}

TEST_CASE("structured conditioning matches the generic wrapper") {
  SplitMix64 g(28);
  for (int rep = 0; rep < 10; ++rep) {
    const SubmodularMixture m = random_cut_mixture(7, g);
    std::vector<int> assignment(7, -1);
    assignment[1] = static_cast<int>(g.next() & 1u);
    assignment[5] = static_cast<int>(g.next() & 1u);
    const SubmodularMixture cond = condition(m, assignment);
    const auto wrapped = restrict_and_contract(
        std::make_shared<SubmodularMixture>(m), assignment);
    CHECK(std::all_of(cond.bases().begin(), cond.bases().end(), [](const auto& f) {
      return dynamic_cast<const CutFunction*>(f.get()) != nullptr;
    }));
    for (std::uint32_t mask = 0; mask < 32; ++mask) {
      const BinaryVector y = vector_from_mask(mask, 5);
      CHECK(cond.eval(y) == doctest::Approx(wrapped->eval(y)).epsilon(1e-12));
    }
  }
}

TEST_CASE("graph file parsing") {
  std::istringstream good("3 2\n0 1 0.5\n1 2 2\n");
  const CutFunction f = CutFunction::parse(good);
  CHECK(f.dim() == 3);
  CHECK(f.eval({1, 0, 0}) == doctest::Approx(0.5));

  std::ostringstream out;
  f.serialize(out);
  std::istringstream in2(out.str());
  const CutFunction f2 = CutFunction::parse(in2);
  CHECK(f2.eval({0, 1, 0}) == doctest::Approx(2.5));

  auto reject = [](const char* text) {
    std::istringstream in(text);
    CHECK_THROWS_AS(CutFunction::parse(in), DataError);
  };
  reject("2 1\n0 1 -1\n");         // negative weight
  reject("2 1\n0 1 nan\n");        // NaN
  reject("2 1\n0 0 1\n");          // self-loop
  reject("2 2\n0 1 1\n0 1 1\n");   // duplicate
  reject("2 2\n0 1 1\n");          // truncated
  reject("2 1\n0 1 1\nextra\n");   // trailing content
  reject("x\n");                   // bad header
}

TEST_CASE("mask round trip") {
  for (std::uint32_t mask = 0; mask < 64; ++mask)
    CHECK(mask_from_vector(vector_from_mask(mask, 6)) == mask);
}
