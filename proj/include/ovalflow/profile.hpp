#pragma once

#include <numbers>
#include <span>
#include <vector>

namespace ovalflow {

/// A convex hypersurface in R^{n+1} = R^{J+1} x R^{n-J} invariant under
/// O(J+1) x O(n-J), stored as the radial function r(theta) of its generating
/// curve (u, v) = (r cos theta, r sin theta) on theta_i = i (pi/2) / m.
///
/// u is the distance from the z-axis plane (|y|), v = |z|. theta = 0 is the
/// plane z = 0 and theta = pi/2 is the z-axis.
class SymmetricProfile {
 public:
  /// Throws ArityError for bad (n, J), GeometryError for non-positive or
  /// non-finite radii or fewer than two grid cells.
  SymmetricProfile(int n, int J, std::vector<double> r);

  int n() const noexcept { return n_; }
  int J() const noexcept { return J_; }
  int m() const noexcept { return static_cast<int>(r_.size()) - 1; }
  double dtheta() const noexcept { return std::numbers::pi / 2 / m(); }
  double theta(int i) const noexcept { return i * dtheta(); }
  std::span<const double> r() const noexcept { return r_; }
  double r(int i) const noexcept { return r_[i]; }
  double u(int i) const;
  double v(int i) const;

  /// Multiplicity of each curvature channel.
  int mult_y() const noexcept { return J_; }
  int mult_z() const noexcept { return n_ - J_ - 1; }

  double min_r() const;
  double max_r() const;

  SymmetricProfile scaled(double c) const;

 private:
  int n_;
  int J_;
  std::vector<double> r_;
};

/// r and its first two theta-derivatives at a node, using even reflection
/// across both axes for the ghost values.
struct RadialJet {
  double theta;
  double r;
  double r_t;
  double r_tt;
  bool at_plane;  ///< theta = 0
  bool at_axis;   ///< theta = pi/2
};

inline RadialJet radial_jet(const SymmetricProfile& p, int i) {
  const int m = p.m();
  const double h = p.dtheta();
  const double rc = p.r(i);
  const double rm = i == 0 ? p.r(1) : p.r(i - 1);
  const double rp = i == m ? p.r(m - 1) : p.r(i + 1);
  RadialJet jet;
  jet.theta = p.theta(i);
  jet.r = rc;
  jet.r_t = (i == 0 || i == m) ? 0.0 : (rp - rm) * (0.5 / h);
  jet.r_tt = (rp - 2 * rc + rm) * (1.0 / (h * h));
  jet.at_plane = i == 0;
  jet.at_axis = i == m;
  return jet;
}

/// Distinct principal curvatures at a point of a symmetric hypersurface.
struct CurvatureSpectrum {
  double kappa_y = 0.0;        ///< multiplicity J
  double kappa_z = 0.0;        ///< multiplicity n-J-1
  double kappa_profile = 0.0;  ///< multiplicity 1

  /// The n-vector of principal curvatures, sorted ascending.
  std::vector<double> expand(int n, int J) const;
  double min(int n, int J) const;
  double max(int n, int J) const;
};

struct RadiiPair {
  double A;  ///< major radius, max |z|
  double B;  ///< minor radius, max |y|
};

}  // namespace ovalflow
