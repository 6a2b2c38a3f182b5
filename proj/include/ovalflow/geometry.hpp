#pragma once

#include <cmath>
#include <vector>

#include "ovalflow/errors.hpp"
#include "ovalflow/profile.hpp"
#include "ovalflow/speed.hpp"

namespace ovalflow {

/// Principal curvatures from the generating-curve reduction: the planar
/// curvature of gamma, nu_u/u (y-sphere directions) and nu_v/v (z-sphere
/// directions), with the axis quotients replaced by their limits.
CurvatureSpectrum curvature_spectrum(const SymmetricProfile& p, int i);
CurvatureSpectrum spectrum_from_jet(const RadialJet& jet);
/// Arc-length factor and reciprocals at a node, reused by the solver.
struct JetMetric {
  double L;      ///< sqrt(r^2 + r_theta^2)
  double inv_L;
  double inv_r;
};

/// Same, with cos, sin and 1/(cos sin) of the node angle supplied by the
/// caller. The last is ignored on the axes.
inline CurvatureSpectrum spectrum_from_jet(const RadialJet& jet, double c, double s, double inv_cs,
                                           JetMetric& metric) {
  const double r = jet.r;
  const double rt = jet.r_t;
  const double rtt = jet.r_tt;
  const double L = std::sqrt(r * r + rt * rt);
  if (!(L > 0.0)) throw GeometryError("zero-length tangent on the generating curve");

  // Reciprocals shared across the channels; this sits in the solver's
  // inner loop.
  const double inv_L = 1.0 / L;
  const double inv_r = 1.0 / r;
  metric = {L, inv_L, inv_r};
  CurvatureSpectrum k;
  k.kappa_profile = (r * r + 2 * rt * rt - r * rtt) * (inv_L * inv_L * inv_L);
  const double nu_u = (r * c + rt * s) * inv_L;
  const double nu_v = (r * s - rt * c) * inv_L;
  // At the axes r_t = 0 and the vanishing coordinate has theta-derivative
  // +-r; the quotient limit reduces to (r - r_tt) / r^2.
  if (jet.at_plane) {
    k.kappa_y = nu_u * inv_r;
    k.kappa_z = (r - rtt) * (inv_r * inv_r);
  } else if (jet.at_axis) {
    k.kappa_y = (r - rtt) * (inv_r * inv_r);
    k.kappa_z = nu_v * inv_r;
  } else {
    const double inv = inv_r * inv_cs;
    k.kappa_y = nu_u * (s * inv);
    k.kappa_z = nu_v * (c * inv);
  }
  return k;
}
inline CurvatureSpectrum spectrum_from_jet(const RadialJet& jet, double c, double s) {
  JetMetric metric;
  const bool axis = jet.at_plane || jet.at_axis;
  return spectrum_from_jet(jet, c, s, axis ? 0.0 : 1.0 / (c * s), metric);
}
std::vector<CurvatureSpectrum> curvature_field(const SymmetricProfile& p);

/// Outward unit normal (nu_u, nu_v) of the generating curve at a node.
struct PlanarVector {
  double u;
  double v;
};
PlanarVector outward_normal(const RadialJet& jet);

RadiiPair major_minor_radius(const SymmetricProfile& p);

struct CylinderShape {
  double R;  ///< S^J(R) x R^{n-J}
};
struct SphereShape {
  double R;  ///< S^n(R) centered at the origin
};

/// Ambient distance, computed in the generating quarter plane. Zero when the
/// discrete curves meet.
double hypersurface_distance(const SymmetricProfile& p, const SymmetricProfile& q);
double hypersurface_distance(const SymmetricProfile& p, CylinderShape c);
double hypersurface_distance(const SymmetricProfile& p, SphereShape s);

/// Radius of the generating polyline along the ray at angle theta.
double polyline_radius(const SymmetricProfile& p, double theta);

enum class Nesting { p_inside_q, q_inside_p, intersecting };
Nesting nesting(const SymmetricProfile& p, const SymmetricProfile& q);

/// Largest ball tangent at node i that lies inside the closed generating curve
/// (vertices of all four reflected quarter curves).
double inscribed_radius(const SymmetricProfile& p, int i);

struct ConvexityReport {
  double min_lambda = 0.0;
  int min_lambda_index = 0;
  bool strictly_convex = false;  ///< C1
  double c2_ratio_min = 0.0;     ///< min of (lambda_1 + ... + lambda_{n-J+1}) / H
  double beta_threshold = 0.0;
  bool c2_pass = false;
  double c3_kappa_min = 0.0;  ///< min of inscribed radius * f(lambda)
  std::vector<double> c2_ratio;
  std::vector<double> c3_kappa;
};

/// Never throws for nonconvex input; a non-positive curvature is reported and
/// the C2/C3 entries at such nodes are skipped.
ConvexityReport convexity_report(const SymmetricProfile& p, const SpeedFunction& f,
                                 double beta_threshold);

}  // namespace ovalflow
