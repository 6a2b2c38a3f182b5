#include "ovalflow/interp.hpp"

#include <algorithm>
#include <cmath>

#include "ovalflow/errors.hpp"

namespace ovalflow {

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n < 2 || y_.size() != n) throw DomainError("interpolation needs >= 2 matching knots");
  for (std::size_t k = 1; k < n; ++k) {
    if (!(x_[k] > x_[k - 1])) throw DomainError("interpolation knots must increase strictly");
  }
  std::vector<double> delta(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) delta[k] = (y_[k + 1] - y_[k]) / (x_[k + 1] - x_[k]);
  d_.assign(n, 0.0);
  d_[0] = delta[0];
  d_[n - 1] = delta[n - 2];
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (delta[k - 1] * delta[k] <= 0.0) {
      d_[k] = 0.0;
    } else {
      // Weighted harmonic mean keeps each cubic monotone.
      const double h0 = x_[k] - x_[k - 1];
      const double h1 = x_[k + 1] - x_[k];
      const double w0 = 2 * h1 + h0;
      const double w1 = h1 + 2 * h0;
      d_[k] = (w0 + w1) / (w0 / delta[k - 1] + w1 / delta[k]);
    }
  }
}

std::size_t MonotoneCubic::interval(double t) const {
  if (t <= x_.front()) return 0;
  if (t >= x_.back()) return x_.size() - 2;
  const auto it = std::upper_bound(x_.begin(), x_.end(), t);
  return static_cast<std::size_t>(it - x_.begin()) - 1;
}

double MonotoneCubic::operator()(double t) const {
  const std::size_t k = interval(t);
  const double h = x_[k + 1] - x_[k];
  const double s = std::clamp((t - x_[k]) / h, 0.0, 1.0);
  const double s2 = s * s;
  const double s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * y_[k] + (s3 - 2 * s2 + s) * h * d_[k] +
         (-2 * s3 + 3 * s2) * y_[k + 1] + (s3 - s2) * h * d_[k + 1];
}

}  // namespace ovalflow
