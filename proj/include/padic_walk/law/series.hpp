#pragma once

#include <cmath>

namespace padic {

/// A truncated series: the partial sum and an upper bound on the absolute
/// value of everything left out.
struct SeriesValue {
  double value = 0.0;
  double tail_bound = 0.0;

  [[nodiscard]] double lower() const noexcept { return value - tail_bound; }
  [[nodiscard]] double upper() const noexcept { return value + tail_bound; }
};

/// Neumaier compensated accumulator. add() is order-sensitive only up to
/// rounding of the compensation term.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace padic
