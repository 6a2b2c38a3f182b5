#pragma once

#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "ovalflow/solver.hpp"

namespace ovalflow {

/// A/B of a profile (major over minor radius).
double axis_ratio(const SymmetricProfile& p);

struct Normalization {
  double Lambda;
  double t2;  ///< first time A/B reaches 2
  double T;   ///< extinction bracket midpoint
  /// Lambda computed from the two bracket endpoints instead of the midpoint.
  double Lambda_from_low;
  double Lambda_from_high;
};

/// Locates the first crossing of A/B = 2 (replaying the fine steps between the
/// bracketing snapshots) and sets Lambda = 1/sqrt(T - t2). Throws
/// NormalizationError if A/B starts below 2 or never comes down to 2.
Normalization normalization_scale(const FlowTrajectory& traj);

struct RescaledSnapshot {
  double t_hat;
  SymmetricProfile profile;
};

/// Parabolic rescaling t_hat = Lambda^2 (t - T), profiles scaled by Lambda;
/// the first A/B = 2 crossing lands at t_hat = -1.
struct RescaledTrajectory {
  std::shared_ptr<const FlowTrajectory> base;
  Normalization norm;
  double T_hat;  ///< rescaled initial time, -Lambda^2 T
  std::vector<RescaledSnapshot> snapshots;

  double Lambda() const noexcept { return norm.Lambda; }
  /// Largest K for which backward_rescale has data.
  double max_K() const;
  /// Profile at rescaled time t_hat, interpolated linearly in time.
  SymmetricProfile profile_at(double t_hat) const;
  /// The rescaled flow as an ordinary trajectory starting at t = 0.
  FlowTrajectory as_flow_trajectory() const;
};

RescaledTrajectory rescale(std::shared_ptr<const FlowTrajectory> traj);
inline RescaledTrajectory rescale(FlowTrajectory traj) {
  return rescale(std::make_shared<const FlowTrajectory>(std::move(traj)));
}

struct FamilyDiagnostics {
  std::vector<double> parameters;
  std::vector<double> diameters;  ///< at t_hat = -1
  std::vector<double> T_hat;
  double C_low = 0.0;   ///< D1 bracket, from the smallest-parameter run
  double C_high = 0.0;
  bool d1_pass = false;
  bool d2_pass = false;  ///< |T_hat| strictly increasing
};

/// Diameter of the rescaled hypersurface at t_hat = -1 (2 max r).
double diameter_at_minus_one(const RescaledTrajectory& rt);

/// D1: every diameter inside [d0 / 2, 2 d0] where d0 is the diameter of the
/// smallest-parameter member. D2: |T_hat| strictly increasing in the
/// parameter. Throws ArityError when members differ in (n, J, m, speed).
FamilyDiagnostics d1_d2_diagnostics(const std::vector<const RescaledTrajectory*>& family,
                                    const std::vector<double>& parameters);

/// The rescaled profile at t_hat = -K^2 scaled by 1/K. Throws DomainError for
/// K < 1 and RangeError when -K^2 precedes the rescaled initial time.
SymmetricProfile backward_rescale(const RescaledTrajectory& rt, double K);

struct ThetaWindow {
  double lo = 0.0;
  double hi = 0.5;
};

struct CylinderFit {
  double radius;
  double max_deviation;
  double flatness;
};

/// Mean of u over the window nodes, the relative sup deviation from it, and
/// max (|kappa_z| + |kappa_profile|) / kappa_y. kappa_z enters only when its
/// multiplicity is positive. Throws DomainError if no node lies in the window.
CylinderFit cylinder_fit(const SymmetricProfile& p, ThetaWindow window);

/// max lambda over the grid / min lambda over the grid. Throws DomainError
/// when some curvature is not positive.
double roundness_ratio(const SymmetricProfile& p);

/// Columns t_hat,ratio.
std::string ratio_curve_csv(const RescaledTrajectory& rt);
nlohmann::json rescaled_summary(const RescaledTrajectory& rt);
void to_json(nlohmann::json& j, const FamilyDiagnostics& d);
void to_json(nlohmann::json& j, const CylinderFit& c);

}  // namespace ovalflow
