#pragma once

#include <string_view>
#include <vector>

#include <json.hpp>

#include "ovalflow/solver.hpp"

namespace ovalflow {

enum class BarrierKind { sphere, cylinder };
std::string_view to_string(BarrierKind k);

/// Closed-form shrinking sphere S^n(R(t)) or cylinder S^J(R(t)) x R^{n-J},
/// R(t) = sqrt(R0^2 - 2 c t).
struct BarrierSolution {
  BarrierKind kind;
  double R0;
  double c;  ///< f(1,...,1) for the sphere, c_{J0} for the cylinder
  double T_sing;
};

/// Throws DomainError for R0 <= 0 and CapabilityError for a cylinder whose
/// boundary speed c_{J0} vanishes.
BarrierSolution make_barrier(BarrierKind kind, double R0, const SpeedFunction& f, int J);

/// Throws SingularTimeError for t >= T_sing.
double barrier_radius(const BarrierSolution& b, double t);

struct ComparisonReport {
  std::vector<double> times;
  std::vector<double> rho;
  double min_increment = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// Tracks the distance between two nested flows at the snapshot times of traj
/// (the other flow is interpolated in t) and checks that it never decreases by
/// more than 1e-4 times the initial scale. Throws HypothesisError unless one
/// initially lies strictly inside the other.
ComparisonReport comparison_check(const FlowTrajectory& traj, const FlowTrajectory& other);
ComparisonReport comparison_check(const FlowTrajectory& traj, const BarrierSolution& barrier);

void to_json(nlohmann::json& j, const BarrierSolution& b);
void to_json(nlohmann::json& j, const ComparisonReport& r);

}  // namespace ovalflow
