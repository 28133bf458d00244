#ifndef LSM_SUBMODULAR_HPP
#define LSM_SUBMODULAR_HPP

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <vector>

#include "lsm/numeric.hpp"

namespace lsm {

// A vertex of {0,1}^D; entry d is the indicator of element d.
using BinaryVector = std::vector<std::uint8_t>;

BinaryVector vector_from_mask(std::uint32_t mask, int dim);
std::uint32_t mask_from_vector(const BinaryVector& x);
BinaryVector complement(const BinaryVector& x);

// Set function on {0,1}^D, normalized so that eval(0) == 0. Implementations
// are immutable after construction and safe to evaluate from many threads.
class SetFunction {
 public:
  virtual ~SetFunction() = default;
  virtual int dim() const = 0;
  virtual double eval(const BinaryVector& x) const = 0;
};

using SetFunctionPtr = std::shared_ptr<const SetFunction>;

// Undirected weighted graph cut, f(x) = sum_{(i,j)} w_ij |x_i - x_j|.
// Nonnegative weights make it submodular and symmetric (f(x) = f(1-x)).
class CutFunction : public SetFunction {
 public:
  struct Edge {
    int i, j;  // i < j
    double w;  // >= 0, finite
  };

  CutFunction(int num_nodes, std::vector<Edge> edges);

  int dim() const override { return num_nodes_; }
  double eval(const BinaryVector& x) const override;
  const std::vector<Edge>& edges() const { return edges_; }

  // Plain-text edge list: first line "D E", then E lines "i j w".
  // Rejects NaN or negative weights, self-loops, duplicates, trailing junk.
  static CutFunction parse(std::istream& in);
  void serialize(std::ostream& out) const;

 private:
  int num_nodes_;
  std::vector<Edge> edges_;
};

// Explicit table of all 2^D values, for tests and tiny conditioned models.
class TabulatedFunction : public SetFunction {
 public:
  TabulatedFunction(int dim, std::vector<double> values);
  int dim() const override { return dim_; }
  double eval(const BinaryVector& x) const override;
  double value_at(std::uint32_t mask) const { return values_[mask]; }

 private:
  int dim_;
  std::vector<double> values_;
};

// f(x) = sum_k alpha_k f_k(x) - t'x with alpha >= 0. The learnable model.
class SubmodularMixture : public SetFunction {
 public:
  SubmodularMixture(std::vector<SetFunctionPtr> base_functions,
                    std::vector<double> alpha, std::vector<double> t);

  int dim() const override { return static_cast<int>(t_.size()); }
  double eval(const BinaryVector& x) const override;

  int num_bases() const { return static_cast<int>(bases_.size()); }
  const std::vector<SetFunctionPtr>& bases() const { return bases_; }
  const std::vector<double>& alpha() const { return alpha_; }
  const std::vector<double>& t() const { return t_; }

 private:
  std::vector<SetFunctionPtr> bases_;
  std::vector<double> alpha_;
  std::vector<double> t_;
};

// A point claimed to lie in the base polytope B(f).
struct BasePoint {
  std::vector<double> s;
};

// f(x + e_d) - f(x); requires x_d == 0.
double marginal_gain(const SetFunction& f, const BinaryVector& x, int d);

// Exhaustive second-difference check, D <= 12.
bool is_submodular_bruteforce(const SetFunction& f, double tol = kSubTol);

// Edmonds' greedy algorithm: sorts w descending (stable, so ties resolve to
// the lower index) and takes the chain of marginal gains. The result lies in
// B(f) and maximizes w's over the base polytope.
BasePoint greedy_base_vertex(const SetFunction& f, const std::vector<double>& w);

// w' greedy_base_vertex(f, w); agrees with eval on {0,1}^D.
double lovasz_extension(const SetFunction& f, const std::vector<double>& w);

// Exhaustive membership test for B(f): s(A) <= f(A) for every A and
// s(V) = f(V). D <= 16.
bool in_base_polytope(const SetFunction& f, const BasePoint& s,
                      double tol = 1e-7);

// assignment[d] in {-1 (free), 0, 1}. Returns the function on the free
// coordinates g(y) = f(merge(assignment, y)) - f(merge(assignment, 0)).
SetFunctionPtr restrict_and_contract(SetFunctionPtr f,
                                     const std::vector<int>& assignment);

// Conditioning of a mixture under the same assignment convention. Cut bases
// stay cuts (edges to fixed nodes fold into the modular term, scaled by the
// current alpha), so max-flow solvability is preserved. Non-cut bases are
// wrapped generically.
SubmodularMixture condition(const SubmodularMixture& m,
                            const std::vector<int>& assignment);

}  // namespace lsm

#endif
