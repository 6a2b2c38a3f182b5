// Shared helpers for the unit tests: seeded generators and independent
// oracles that do not go through the library's own formulas.
#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "ovalflow/profile.hpp"

namespace testing {

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

/// Log-uniform positive vector in [lo, hi]^n.
inline std::vector<double> positive_vector(std::mt19937_64& rng, int n, double lo = 0.1,
                                           double hi = 10.0) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * unit(rng));
  return v;
}

struct Point {
  double u;
  double v;
};

/// The generating polyline of p, with every segment subdivided `factor`
/// times, reflected into all four quadrants.
inline std::vector<Point> dense_curve(const ovalflow::SymmetricProfile& p, int factor) {
  std::vector<Point> quarter;
  for (int i = 0; i < p.m(); ++i) {
    const Point a{p.u(i), p.v(i)};
    const Point b{p.u(i + 1), p.v(i + 1)};
    for (int k = 0; k < factor; ++k) {
      const double w = static_cast<double>(k) / factor;
      quarter.push_back({a.u + w * (b.u - a.u), a.v + w * (b.v - a.v)});
    }
  }
  quarter.push_back({p.u(p.m()), p.v(p.m())});
  std::vector<Point> out;
  for (int su : {1, -1}) {
    for (int sv : {1, -1}) {
      for (const auto& q : quarter) out.push_back({su * q.u, sv * q.v});
    }
  }
  return out;
}

/// Brute-force minimum distance between two point clouds.
inline double brute_distance(const std::vector<Point>& a, const std::vector<Point>& b) {
  double best = INFINITY;
  for (const auto& x : a) {
    for (const auto& y : b) best = std::min(best, std::hypot(x.u - y.u, x.v - y.v));
  }
  return best;
}

}  // namespace testing
