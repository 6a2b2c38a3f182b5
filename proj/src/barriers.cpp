#include "ovalflow/barriers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ovalflow/errors.hpp"
#include "ovalflow/geometry.hpp"
#include "ovalflow/profile_io.hpp"

namespace ovalflow {
namespace {

constexpr double kRelativeTolerance = 1e-4;

ComparisonReport finish(ComparisonReport rep) {
  rep.min_increment = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < rep.rho.size(); ++k) {
    rep.min_increment = std::min(rep.min_increment, rep.rho[k] - rep.rho[k - 1]);
  }
  if (rep.rho.size() < 2) rep.min_increment = 0.0;
  rep.pass = rep.min_increment >= -rep.tolerance;
  return rep;
}

}  // namespace

std::string_view to_string(BarrierKind k) {
  return k == BarrierKind::sphere ? "sphere" : "cylinder";
}

BarrierSolution make_barrier(BarrierKind kind, double R0, const SpeedFunction& f, int J) {
  if (!(R0 > 0.0) || !std::isfinite(R0)) throw DomainError("barrier radius must be positive");
  const int n = f.arity();
  double c = 0.0;
  if (kind == BarrierKind::sphere) {
    c = f.eval(std::vector<double>(n, 1.0));
  } else {
    if (J < 1 || J > n - 1) throw ArityError("cylinder needs 1 <= J <= n-1");
    c = boundary_speed_cJ0(f, n, J);
    if (!(c > 0.0)) {
      throw CapabilityError("speed '" + f.name() + "' has c_J0 = 0; no shrinking cylinder");
    }
  }
  return {kind, R0, c, R0 * R0 / (2 * c)};
}

double barrier_radius(const BarrierSolution& b, double t) {
  if (!(t < b.T_sing)) {
    throw SingularTimeError("t = " + format_real(t) + " is not before the singular time " +
                            format_real(b.T_sing));
  }
  return std::sqrt(b.R0 * b.R0 - 2 * b.c * t);
}

ComparisonReport comparison_check(const FlowTrajectory& traj, const FlowTrajectory& other) {
  if (traj.snapshots.empty() || other.snapshots.empty()) {
    throw HypothesisError("comparison needs non-empty trajectories");
  }
  const auto& p0 = traj.snapshots.front().profile;
  const auto& q0 = other.snapshots.front().profile;
  if (nesting(p0, q0) == Nesting::intersecting || hypersurface_distance(p0, q0) <= 0.0) {
    throw HypothesisError("initial hypersurfaces are not strictly nested");
  }
  ComparisonReport rep;
  rep.tolerance = kRelativeTolerance * std::max(p0.max_r(), q0.max_r());
  const double t_lo = std::max(traj.snapshots.front().t, other.snapshots.front().t);
  const double t_hi = std::min(traj.snapshots.back().t, other.snapshots.back().t);
  for (const auto& s : traj.snapshots) {
    if (s.t < t_lo || s.t > t_hi) continue;
    rep.times.push_back(s.t);
    rep.rho.push_back(hypersurface_distance(s.profile, profile_at(other, s.t)));
  }
  return finish(std::move(rep));
}

ComparisonReport comparison_check(const FlowTrajectory& traj, const BarrierSolution& barrier) {
  if (traj.snapshots.empty()) throw HypothesisError("comparison needs a non-empty trajectory");
  const auto& p0 = traj.snapshots.front().profile;
  const double R = barrier.R0;
  bool nested = false;
  if (barrier.kind == BarrierKind::sphere) {
    nested = R < p0.min_r() || R > p0.max_r();
  } else {
    nested = major_minor_radius(p0).B < R;
  }
  if (!nested) throw HypothesisError("barrier and initial hypersurface are not strictly nested");

  ComparisonReport rep;
  rep.tolerance = kRelativeTolerance * std::max(p0.max_r(), R);
  for (const auto& s : traj.snapshots) {
    if (!(s.t < barrier.T_sing)) break;
    const double Rt = barrier_radius(barrier, s.t);
    rep.times.push_back(s.t);
    rep.rho.push_back(barrier.kind == BarrierKind::sphere
                          ? hypersurface_distance(s.profile, SphereShape{Rt})
                          : hypersurface_distance(s.profile, CylinderShape{Rt}));
  }
  return finish(std::move(rep));
}

void to_json(nlohmann::json& j, const BarrierSolution& b) {
  j = {{"kind", std::string(to_string(b.kind))}, {"R0", b.R0}, {"c", b.c}, {"T_sing", b.T_sing}};
}

void to_json(nlohmann::json& j, const ComparisonReport& r) {
  j = {{"times", r.times},
       {"rho", r.rho},
       {"min_increment", r.min_increment},
       {"tolerance", r.tolerance},
       {"pass", r.pass}};
}

}  // namespace ovalflow
