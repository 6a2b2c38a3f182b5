#include "ovalflow/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ovalflow/errors.hpp"

namespace ovalflow {

namespace {

struct Trig {
  double c;
  double s;
};

Trig trig(const RadialJet& jet) {
  if (jet.at_plane) return {1.0, 0.0};
  if (jet.at_axis) return {0.0, 1.0};
  return {std::cos(jet.theta), std::sin(jet.theta)};
}

struct Point2 {
  double u;
  double v;
};

double dist(Point2 a, Point2 b) { return std::hypot(a.u - b.u, a.v - b.v); }

double point_segment(Point2 p, Point2 a, Point2 b) {
  const double du = b.u - a.u;
  const double dv = b.v - a.v;
  const double len2 = du * du + dv * dv;
  if (len2 == 0.0) return dist(p, a);
  const double t = std::clamp(((p.u - a.u) * du + (p.v - a.v) * dv) / len2, 0.0, 1.0);
  return dist(p, {a.u + t * du, a.v + t * dv});
}

std::vector<Point2> quarter_curve(const SymmetricProfile& p) {
  std::vector<Point2> pts(p.m() + 1);
  for (int i = 0; i <= p.m(); ++i) pts[i] = {p.u(i), p.v(i)};
  return pts;
}

// Deterministic ordering so that distance(p, q) and distance(q, p) run the
// same arithmetic.
bool ordered_before(const SymmetricProfile& p, const SymmetricProfile& q) {
  const auto a = p.r();
  const auto b = q.r();
  if (a.size() != b.size()) return a.size() < b.size();
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

double profile_distance_ordered(const SymmetricProfile& p, const SymmetricProfile& q) {
  if (nesting(p, q) == Nesting::intersecting) return 0.0;
  const auto P = quarter_curve(p);
  const auto Q = quarter_curve(q);
  // Exact distance between the two polylines: for disjoint segments the
  // minimum is attained at an endpoint of one of them.
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < P.size(); ++i) {
    for (std::size_t j = 0; j + 1 < Q.size(); ++j) best = std::min(best, point_segment(P[i], Q[j], Q[j + 1]));
  }
  for (std::size_t j = 0; j < Q.size(); ++j) {
    for (std::size_t i = 0; i + 1 < P.size(); ++i) best = std::min(best, point_segment(Q[j], P[i], P[i + 1]));
  }
  return best;
}

}  // namespace

PlanarVector outward_normal(const RadialJet& jet) {
  const auto [c, s] = trig(jet);
  const double L = std::hypot(jet.r, jet.r_t);
  return {(jet.r * c + jet.r_t * s) / L, (jet.r * s - jet.r_t * c) / L};
}

CurvatureSpectrum spectrum_from_jet(const RadialJet& jet) {
  const auto [c, s] = trig(jet);
  return spectrum_from_jet(jet, c, s);
}

CurvatureSpectrum curvature_spectrum(const SymmetricProfile& p, int i) {
  if (i < 0 || i > p.m()) throw DomainError("grid index out of range");
  return spectrum_from_jet(radial_jet(p, i));
}

std::vector<CurvatureSpectrum> curvature_field(const SymmetricProfile& p) {
  std::vector<CurvatureSpectrum> out(p.m() + 1);
  for (int i = 0; i <= p.m(); ++i) out[i] = spectrum_from_jet(radial_jet(p, i));
  return out;
}

RadiiPair major_minor_radius(const SymmetricProfile& p) {
  RadiiPair rp{0.0, 0.0};
  for (int i = 0; i <= p.m(); ++i) {
    rp.A = std::max(rp.A, p.v(i));
    rp.B = std::max(rp.B, p.u(i));
  }
  return rp;
}

double hypersurface_distance(const SymmetricProfile& p, const SymmetricProfile& q) {
  if (p.n() != q.n() || p.J() != q.J()) {
    throw ArityError("distance between profiles with different (n, J)");
  }
  return ordered_before(q, p) ? profile_distance_ordered(q, p) : profile_distance_ordered(p, q);
}

double hypersurface_distance(const SymmetricProfile& p, CylinderShape c) {
  if (!(c.R > 0.0)) throw DomainError("cylinder radius must be positive");
  // Translation invariance in z lets every point match its own height.
  const double B = major_minor_radius(p).B;
  return B < c.R ? c.R - B : 0.0;
}

double hypersurface_distance(const SymmetricProfile& p, SphereShape s) {
  if (!(s.R > 0.0)) throw DomainError("sphere radius must be positive");
  const double lo = p.min_r();
  const double hi = p.max_r();
  if (lo <= s.R && s.R <= hi) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (double r : p.r()) best = std::min(best, std::abs(r - s.R));
  return best;
}

double polyline_radius(const SymmetricProfile& p, double theta) {
  const int m = p.m();
  const double h = p.dtheta();
  theta = std::clamp(theta, 0.0, std::numbers::pi / 2);
  int k = std::min(static_cast<int>(theta / h), m - 1);
  const Point2 a{p.u(k), p.v(k)};
  const Point2 b{p.u(k + 1), p.v(k + 1)};
  // Ray (cos t, sin t) * rho meets the chord a + s (b - a).
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double du = b.u - a.u;
  const double dv = b.v - a.v;
  const double denom = c * dv - s * du;
  if (denom == 0.0) return std::hypot(a.u, a.v);
  return (a.u * dv - a.v * du) / denom;
}

Nesting nesting(const SymmetricProfile& p, const SymmetricProfile& q) {
  bool p_below = true;  // r_p < r_q everywhere
  bool p_above = true;
  auto consider = [&](double rp, double rq) {
    if (!(rp < rq)) p_below = false;
    if (!(rp > rq)) p_above = false;
  };
  for (int i = 0; i <= p.m(); ++i) consider(p.r(i), polyline_radius(q, p.theta(i)));
  for (int j = 0; j <= q.m(); ++j) consider(polyline_radius(p, q.theta(j)), q.r(j));
  if (p_below) return Nesting::p_inside_q;
  if (p_above) return Nesting::q_inside_p;
  return Nesting::intersecting;
}

double inscribed_radius(const SymmetricProfile& p, int i) {
  const auto jet = radial_jet(p, i);
  const auto nu = outward_normal(jet);
  const Point2 x{p.u(i), p.v(i)};
  const Point2 inward{-nu.u, -nu.v};
  // A ball tangent at x with centre x + R*inward passes through y when
  // R = |y - x|^2 / (2 (y - x) . inward); the largest admissible ball is the
  // smallest such R over the curve.
  double best = std::numeric_limits<double>::infinity();
  const int m = p.m();
  for (int su = -1; su <= 1; su += 2) {
    for (int sv = -1; sv <= 1; sv += 2) {
      for (int j = 0; j <= m; ++j) {
        const Point2 y{su * p.u(j), sv * p.v(j)};
        const double du = y.u - x.u;
        const double dv = y.v - x.v;
        const double d2 = du * du + dv * dv;
        if (d2 < 1e-24 * (1.0 + x.u * x.u + x.v * x.v)) continue;
        const double proj = du * inward.u + dv * inward.v;
        if (proj <= 0.0) continue;
        best = std::min(best, d2 / (2 * proj));
      }
    }
  }
  return best;
}

ConvexityReport convexity_report(const SymmetricProfile& p, const SpeedFunction& f,
                                 double beta_threshold) {
  if (f.arity() != p.n()) throw ArityError("speed arity does not match profile dimension");
  const int n = p.n();
  const int J = p.J();
  ConvexityReport rep;
  rep.beta_threshold = beta_threshold;
  rep.min_lambda = std::numeric_limits<double>::infinity();
  rep.c2_ratio_min = std::numeric_limits<double>::infinity();
  rep.c3_kappa_min = std::numeric_limits<double>::infinity();
  const auto field = curvature_field(p);
  for (int i = 0; i <= p.m(); ++i) {
    const auto lam = field[i].expand(n, J);
    if (lam.front() < rep.min_lambda) {
      rep.min_lambda = lam.front();
      rep.min_lambda_index = i;
    }
    if (!(lam.front() > 0.0)) {
      rep.c2_ratio.push_back(std::numeric_limits<double>::quiet_NaN());
      rep.c3_kappa.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    double partial = 0.0;
    double H = 0.0;
    for (int k = 0; k < n; ++k) {
      H += lam[k];
      if (k < n - J + 1) partial += lam[k];
    }
    const double ratio = partial / H;
    const double kappa = inscribed_radius(p, i) * f.eval_unchecked(lam);
    rep.c2_ratio.push_back(ratio);
    rep.c3_kappa.push_back(kappa);
    rep.c2_ratio_min = std::min(rep.c2_ratio_min, ratio);
    rep.c3_kappa_min = std::min(rep.c3_kappa_min, kappa);
  }
  rep.strictly_convex = rep.min_lambda > 0.0;
  rep.c2_pass = rep.strictly_convex && rep.c2_ratio_min >= beta_threshold;
  return rep;
}

}  // namespace ovalflow
