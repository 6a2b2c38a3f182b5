#pragma once

#include <random>
#include <vector>

#include "ovalflow/geometry.hpp"
#include "ovalflow/profile.hpp"
#include "ovalflow/speed.hpp"

namespace ovalflow {

/// Capped almost-cylinder: |y| = psi(|z|) for |z| in [0, a+1].
struct CapSpec {
  double a = 2.0;         ///< cylinder half-length, >= 1
  double epsilon0 = 0.1;  ///< centre bulge, psi(0) = 1 + epsilon0
  int m = 400;            ///< theta-grid size of the built profile
};

struct CapValue {
  double value;
  double d1;
  double d2;
};

/// The concrete psi used for capped initial data.
///
/// On [a, a+1] psi is a fixed quarter-ellipse arc psi*(s - a) which meets the
/// axis at s = a+1 with a vertical tangent; its shape depends on epsilon0
/// only. On [0, a] psi'' = -(c0 + c1 (s/a)^k) with (c0, c1, k) solved so that
/// psi(0) = 1 + epsilon0, psi'(0) = 0 and psi matches psi* to second order at
/// s = a. Throws ConstructionError when no such (c0, c1, k) with c0, c1 > 0
/// exists, which happens for epsilon0 above roughly 0.12.
class CapFunction {
 public:
  explicit CapFunction(const CapSpec& spec);

  /// Throws DomainError for s outside [0, a+1].
  CapValue operator()(double s) const;

  const CapSpec& spec() const noexcept { return spec_; }
  double cap_offset() const noexcept { return sigma_; }
  double joint_slope() const noexcept { return slope_; }
  double joint_curvature() const noexcept { return curv_; }

  /// Point of the generating curve, tau in [0, 2]: tau <= 1 walks the neck
  /// uniformly in s, tau >= 1 walks the cap uniformly in the ellipse angle.
  struct CurvePoint {
    double u;
    double v;
  };
  CurvePoint curve(double tau) const;

 private:
  CapSpec spec_;
  double sigma_ = 0.0;  // ellipse centre sits at s = a - sigma
  double q0_ = 0.0;     // 1 - (sigma / (1 + sigma))^2
  double phi0_ = 0.0;
  double slope_ = 0.0;  // -psi'(a)
  double curv_ = 0.0;   // -psi''(a)
  double c0_ = 0.0;
  double c1_ = 0.0;
  double k_ = 0.0;
};

CapValue cap_function(const CapSpec& spec, double s);

/// Exact curvatures of the capped surface at height s = |z|, from psi.
CurvatureSpectrum cap_spectrum_exact(const CapFunction& psi, double s);

SymmetricProfile build_cap_profile(int n, int J, const CapSpec& spec, int m);
inline SymmetricProfile build_cap_profile(int n, int J, const CapSpec& spec) {
  return build_cap_profile(n, J, spec, spec.m);
}

/// |y|^2 + |z|^2 / a^2 = 1.
SymmetricProfile build_ellipsoid_profile(int n, int J, double a, int m);
SymmetricProfile build_sphere_profile(int n, int J, double R, int m);

/// Seeded strictly convex test shape: an ellipse with random semi-axes,
/// modulated by (1 + d cos 4 theta) with a small random d.
SymmetricProfile random_convex_profile(std::mt19937_64& rng, int n, int J, int m);

struct InitialValidation {
  ConvexityReport convexity;
  bool c1 = false;
  double c2_ratio_floor = 0.0;
  double c3_kappa_floor = 0.0;
};

InitialValidation validate_initial(const SymmetricProfile& p, const SpeedFunction& f,
                                   double beta_threshold = 0.0);

struct FamilyValidation {
  std::vector<double> parameters;
  std::vector<InitialValidation> members;
  bool all_c1 = false;
  double c2_spread = 0.0;  ///< (max - min) / max of the C2 floors
  double c3_spread = 0.0;
  bool c2_uniform = false;  ///< spread <= 10%
  bool c3_uniform = false;
};

FamilyValidation validate_initial_family(const std::vector<SymmetricProfile>& family,
                                         const std::vector<double>& parameters,
                                         const SpeedFunction& f, double beta_threshold = 0.0);

}  // namespace ovalflow
