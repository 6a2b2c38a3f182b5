#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ovalflow/profile.hpp"
#include "ovalflow/speed.hpp"

namespace ovalflow {

/// Stop thresholds are relative to the initial profile, so the run is
/// covariant under scaling of the initial data.
struct SolverConfig {
  double cfl_safety = 0.4;
  double stop_min_r = 0.01;      ///< stop once min r < stop_min_r * (initial min r)
  double stop_max_speed = 1e4;   ///< stop once max f > stop_max_speed * (initial max f)
  std::int64_t max_steps = 20'000'000;
  std::int64_t record_every = 200;
  double stop_time = std::numeric_limits<double>::infinity();  ///< absolute; last step is clipped
  /// When positive: once A/B first drops to stop_ratio, stop as soon as min r
  /// falls below stop_ratio_depth times min r at that moment.
  double stop_ratio = 0.0;
  double stop_ratio_depth = 1e-3;
};

/// Throws DomainError when a field is out of range.
void validate(const SolverConfig& cfg);

enum class Termination { min_radius, speed_blowup, max_steps, time_limit };
std::string_view to_string(Termination t);

struct Snapshot {
  double t;
  std::int64_t step;
  SymmetricProfile profile;
  double t_carry = 0.0;  ///< compensated-summation remainder of t
  /// Time until the final snapshot, summed from the step sizes. Stays accurate
  /// after t itself stops resolving late steps.
  double to_end = 0.0;
};

/// Snapshot times are nondecreasing; very late snapshots may share a t value
/// once steps fall below its resolution, while to_end stays strictly
/// decreasing.
struct FlowTrajectory {
  std::vector<Snapshot> snapshots;
  double t_low = 0.0;
  double t_high = 0.0;
  Termination reason = Termination::max_steps;
  SpeedFunction speed;
  SolverConfig config;
  double initial_min_r = 0.0;
  double initial_max_r = 0.0;
  double initial_max_speed = 0.0;

  std::pair<double, double> extinction_bracket() const { return {t_low, t_high}; }
  double extinction_midpoint() const { return 0.5 * (t_low + t_high); }
};

/// dr/dt = -f(lambda) sqrt(r^2 + r_theta^2) / r at every node. Throws
/// DomainError when f is undefined at some node's curvatures.
std::vector<double> radial_velocity(const SymmetricProfile& p, const SpeedFunction& f);

struct StepResult {
  SymmetricProfile profile;
  double dt;
};

/// One forward-Euler step at the parabolic CFL limit. Throws StepFailure if
/// the updated profile is invalid or the speed degenerates.
StepResult step(const SymmetricProfile& p, const SpeedFunction& f, const SolverConfig& cfg);

using StepObserver = std::function<void(std::int64_t step, double t, const SymmetricProfile&)>;

FlowTrajectory run_to_extinction(const SymmetricProfile& p0, const SpeedFunction& f,
                                 const SolverConfig& cfg, const StepObserver& observer = {});

/// Replays the fine steps between snapshots k and k+1. The scheme is
/// deterministic, so the replay reproduces the original run exactly.
std::vector<Snapshot> replay_interval(const FlowTrajectory& traj, std::size_t k);

/// Profile at time t by linear interpolation of r between snapshots. Throws
/// RangeError outside the recorded time range.
SymmetricProfile profile_at(const FlowTrajectory& traj, double t);

struct SnapshotStats {
  double t, min_r, max_r, A, B, min_lambda, max_lambda, f_max;
};
SnapshotStats snapshot_stats(const Snapshot& s, const SpeedFunction& f);

/// Columns t,min_r,max_r,A,B,min_lambda,max_lambda,f_max.
std::string trajectory_csv(const FlowTrajectory& traj);
nlohmann::json trajectory_summary(const FlowTrajectory& traj);
void to_json(nlohmann::json& j, const SolverConfig& cfg);

}  // namespace ovalflow
