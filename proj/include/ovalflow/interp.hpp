#pragma once

#include <span>
#include <vector>

namespace ovalflow {

/// Monotone piecewise-cubic Hermite interpolant (Fritsch-Carlson slopes).
/// Knots must be strictly increasing.
class MonotoneCubic {
 public:
  MonotoneCubic(std::vector<double> x, std::vector<double> y);
  double operator()(double t) const;
  /// Index k with x[k] <= t <= x[k+1], clamped to the knot range.
  std::size_t interval(double t) const;
  std::span<const double> knots() const noexcept { return x_; }

 private:
  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> d_;
};

}  // namespace ovalflow
