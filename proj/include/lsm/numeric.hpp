#ifndef LSM_NUMERIC_HPP
#define LSM_NUMERIC_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace lsm {

// Absolute tolerance for identities that hold in exact arithmetic.
constexpr double kNumTol = 1e-9;
// Slack allowed when checking submodularity inequalities.
constexpr double kSubTol = 1e-9;
// Logits of empirical probabilities are clamped to this magnitude.
constexpr double kLogitClamp = 30.0;

inline double softplus(double x) {
  // log(1 + e^x), stable in both tails
  return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

inline double sigmoid(double x) {
  if (x >= 0) {
    const double e = std::exp(-x);
    return 1.0 / (1.0 + e);
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

inline double clamped_logit(double p, double bound = kLogitClamp) {
  if (p <= 0) return -bound;
  if (p >= 1) return bound;
  return std::clamp(std::log(p) - std::log1p(-p), -bound, bound);
}

inline double bernoulli_entropy(double mu) {
  double h = 0;
  if (mu > 0) h -= mu * std::log(mu);
  if (mu < 1) h -= (1 - mu) * std::log(1 - mu);
  return h;
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double mean_of(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

// Sample standard deviation (n-1 denominator); 0 for fewer than two points.
inline double stddev_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double s = 0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

// Streaming log-sum-exp accumulator.
class LogSumExp {
 public:
  void add(double v) {
    if (std::isinf(max_) && max_ < 0) {
      max_ = v;
      acc_ = 1.0;
    } else if (v <= max_) {
      acc_ += std::exp(v - max_);
    } else {
      acc_ = acc_ * std::exp(max_ - v) + 1.0;
      max_ = v;
    }
  }
  double value() const {
    if (std::isinf(max_) && max_ < 0) return max_;
    return max_ + std::log(acc_);
  }

 private:
  double max_ = -std::numeric_limits<double>::infinity();
  double acc_ = 0.0;
};

}  // namespace lsm

#endif
