#include "ovalflow/profile.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ovalflow/errors.hpp"

namespace ovalflow {

SymmetricProfile::SymmetricProfile(int n, int J, std::vector<double> r)
    : n_(n), J_(J), r_(std::move(r)) {
  if (n_ < 2 || J_ < 1 || J_ > n_ - 1) {
    std::ostringstream os;
    os << "profile needs n >= 2 and 1 <= J <= n-1, got n = " << n_ << ", J = " << J_;
    throw ArityError(os.str());
  }
  if (r_.size() < 3) throw GeometryError("profile grid needs m >= 2");
  for (std::size_t i = 0; i < r_.size(); ++i) {
    if (!(r_[i] > 0.0) || !std::isfinite(r_[i])) {
      std::ostringstream os;
      os << "profile radius must be positive and finite, r[" << i << "] = " << r_[i];
      throw GeometryError(os.str());
    }
  }
}

double SymmetricProfile::u(int i) const {
  if (i == m()) return 0.0;
  return r_[i] * std::cos(theta(i));
}

double SymmetricProfile::v(int i) const {
  if (i == 0) return 0.0;
  if (i == m()) return r_[i];
  return r_[i] * std::sin(theta(i));
}

// Plain reductions so the compiler can vectorize them; r is positive and
// finite by construction.
double SymmetricProfile::min_r() const {
  double lo = r_[0];
  for (double x : r_) lo = x < lo ? x : lo;
  return lo;
}
double SymmetricProfile::max_r() const {
  double hi = r_[0];
  for (double x : r_) hi = x > hi ? x : hi;
  return hi;
}

SymmetricProfile SymmetricProfile::scaled(double c) const {
  std::vector<double> out(r_);
  for (auto& x : out) x *= c;
  return SymmetricProfile(n_, J_, std::move(out));
}

std::vector<double> CurvatureSpectrum::expand(int n, int J) const {
  std::vector<double> out;
  out.reserve(n);
  out.insert(out.end(), J, kappa_y);
  out.insert(out.end(), n - J - 1, kappa_z);
  out.push_back(kappa_profile);
  std::sort(out.begin(), out.end());
  return out;
}

double CurvatureSpectrum::min(int n, int J) const {
  double v = kappa_profile;
  if (J > 0) v = std::min(v, kappa_y);
  if (n - J - 1 > 0) v = std::min(v, kappa_z);
  return v;
}

double CurvatureSpectrum::max(int n, int J) const {
  double v = kappa_profile;
  if (J > 0) v = std::max(v, kappa_y);
  if (n - J - 1 > 0) v = std::max(v, kappa_z);
  return v;
}

}  // namespace ovalflow
