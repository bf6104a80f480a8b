#pragma once

// Stable log-space primitives. Everything downstream (hitting-time prefix
// functionals, classifiers) accumulates in log space because the quantities
// grow like exp(n^power); linear space overflows almost immediately.

#include <cmath>
#include <limits>

namespace rwre {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log(1 + e^x), the stable -log q for log-odds x.
inline double softplus(double x) {
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

// log(e^a + e^b), max-factored. Never below max(a,b).
inline double logaddexp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = a > b ? a : b;
  const double lo = a > b ? b : a;
  return hi + std::log1p(std::exp(lo - hi));
}

// Streaming log-sum-exp with a running maximum: value() = log sum e^{x_k}
// over everything added, accurate to a few ulps per add and never below the
// largest single term. Addition order is part of the contract (fixed
// ascending order everywhere) so results are bit-reproducible.
class LogSumAccumulator {
 public:
  void add(double x) {
    if (x == kNegInf) return;
    if (empty_) {
      max_ = x;
      sum_ = 1.0;
      empty_ = false;
      return;
    }
    if (x <= max_) {
      sum_ += std::exp(x - max_);
    } else {
      // Rescale the accumulated mass to the new maximum; the new term
      // contributes exactly 1, keeping value() >= max term bit-for-bit.
      sum_ = sum_ * std::exp(max_ - x) + 1.0;
      max_ = x;
    }
  }

  bool empty() const { return empty_; }
  double value() const { return empty_ ? kNegInf : max_ + std::log(sum_); }
  double max_term() const { return empty_ ? kNegInf : max_; }

 private:
  double max_ = kNegInf;
  double sum_ = 0.0;
  bool empty_ = true;
};

}  // namespace rwre
