#pragma once

#include <cmath>
#include <cstdint>

namespace mvbandit {

/// Streaming (count, mean, M2) accumulator (Welford).
class RunningStat {
 public:
  void add(double x) {
    ++n_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (x - mean_);
  }

  std::uint64_t count() const { return n_; }
  double mean() const { return mean_; }
  double m2() const { return m2_; }

  /// 1/n form; zero for fewer than two values.
  double population_variance() const {
    return n_ > 1 ? m2_ / static_cast<double>(n_) : 0.0;
  }
  /// 1/(n-1) form; zero for fewer than two values.
  double sample_variance() const {
    return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0;
  }
  double standard_error() const {
    return n_ > 0 ? std::sqrt(sample_variance() / static_cast<double>(n_)) : 0.0;
  }

 private:
  std::uint64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

}  // namespace mvbandit
