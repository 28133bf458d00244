#ifndef LSM_RNG_HPP
#define LSM_RNG_HPP

#include <cmath>
#include <cstdint>
#include <vector>

namespace lsm {

// splitmix64. Small, fast, and fully specified, so streams are bit-identical
// across platforms and independent of how work is scheduled.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform on the open interval (0,1).
  double uniform01() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Standard logistic via inverse CDF.
  double logistic() {
    const double v = uniform01();
    return std::log(v) - std::log1p(-v);
  }

  std::uint64_t below(std::uint64_t n) { return next() % n; }

 private:
  std::uint64_t state_;
};

// Deterministic sub-seed for stream `index` of a base seed. Every sampling
// unit (Monte-Carlo sample, training iteration, image) derives its own seed,
// so results do not depend on evaluation order.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::vector<double> logistic_vector(std::uint64_t seed, int dim) {
  SplitMix64 g(seed);
  std::vector<double> z(static_cast<std::size_t>(dim));
  for (auto& v : z) v = g.logistic();
  return z;
}

// Box-Muller pair generator for the Gaussian cluster data.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : g_(seed) {}

  double next() {
    if (have_) {
      have_ = false;
      return cached_;
    }
    const double u1 = g_.uniform01();
    const double u2 = g_.uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * 3.14159265358979323846 * u2;
    cached_ = r * std::sin(a);
    have_ = true;
    return r * std::cos(a);
  }

 private:
  SplitMix64 g_;
  bool have_ = false;
  double cached_ = 0.0;
};

}  // namespace lsm

#endif
