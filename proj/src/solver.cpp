#include "ovalflow/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ovalflow/errors.hpp"
#include "ovalflow/geometry.hpp"
#include "ovalflow/profile_io.hpp"

namespace ovalflow {
namespace {

// Per-grid scratch for the velocity field: trig tables and curvature buffers.
class Kernel {
 public:
  Kernel(const SymmetricProfile& p, const SpeedFunction& f)
      : f_(f), block_(f.has_block_eval()), n_(p.n()), J_(p.J()) {
    if (f.arity() != p.n()) throw ArityError("speed arity does not match profile dimension");
    const int m = p.m();
    cos_.resize(m + 1);
    sin_.resize(m + 1);
    for (int i = 0; i <= m; ++i) {
      cos_[i] = std::cos(p.theta(i));
      sin_[i] = std::sin(p.theta(i));
    }
    cos_[0] = 1.0;
    sin_[0] = 0.0;
    cos_[m] = 0.0;
    sin_[m] = 1.0;
    inv_cs_.assign(m + 1, 0.0);
    for (int i = 1; i < m; ++i) inv_cs_[i] = 1.0 / (cos_[i] * sin_[i]);
    lam_.resize(n_);
    grad_.resize(n_);
  }

  struct Field {
    double max_diffusivity = 0.0;
    double max_speed = 0.0;
    double min_lambda = std::numeric_limits<double>::infinity();
  };

  // strict: require lambda > 0 everywhere (solver); otherwise fall back to the
  // speed's closure on the boundary of the cone.
  Field velocity(const SymmetricProfile& p, std::vector<double>& vel, bool strict) {
    Field out;
    const int m = p.m();
    vel.resize(m + 1);
    const double* r = p.r().data();
    const double h = p.dtheta();
    const double inv_2h = 0.5 / h;
    const double inv_h2 = 1.0 / (h * h);
    node(radial_jet(p, 0), 0, vel, strict, out);
    for (int i = 1; i < m; ++i) {
      // radial_jet, unrolled for interior nodes
      const RadialJet jet{p.theta(i), r[i], (r[i + 1] - r[i - 1]) * inv_2h,
                          (r[i + 1] - 2 * r[i] + r[i - 1]) * inv_h2, false, false};
      node(jet, i, vel, strict, out);
    }
    node(radial_jet(p, m), m, vel, strict, out);
    return out;
  }

  // major_minor_radius without the per-node trig.
  RadiiPair radii(const SymmetricProfile& p) const {
    RadiiPair rp{0.0, 0.0};
    for (int i = 0; i <= p.m(); ++i) {
      rp.A = std::max(rp.A, p.r(i) * sin_[i]);
      rp.B = std::max(rp.B, p.r(i) * cos_[i]);
    }
    return rp;
  }

 private:
  void node(const RadialJet& jet, int i, std::vector<double>& vel,
            bool strict, Field& out) {
    JetMetric g;
    const CurvatureSpectrum k = spectrum_from_jet(jet, cos_[i], sin_[i], inv_cs_[i], g);
    const double lo = k.min(n_, J_);
    out.min_lambda = std::min(out.min_lambda, lo);
    double fv = 0.0;
    if (lo > 0.0 && block_) {
      const auto b = f_.block_unchecked(k.kappa_y, J_, k.kappa_z, k.kappa_profile);
      fv = b.f;
      if (strict) {
        out.max_diffusivity = std::max(out.max_diffusivity, b.grad_sum * (g.inv_L * g.inv_L));
      }
    } else {
      int idx = 0;
      for (int a = 0; a < J_; ++a) lam_[idx++] = k.kappa_y;
      for (int a = 0; a < n_ - J_ - 1; ++a) lam_[idx++] = k.kappa_z;
      lam_[idx] = k.kappa_profile;
      if (lo > 0.0) {
        fv = f_.eval_unchecked(lam_);
        if (strict) {
          f_.grad_unchecked(lam_, grad_);
          double sum = 0.0;
          for (double x : grad_) sum += x;
          out.max_diffusivity = std::max(out.max_diffusivity, sum * (g.inv_L * g.inv_L));
        }
      } else if (strict) {
        throw StepFailure("non-positive principal curvature " + format_real(lo) + " at node " +
                          std::to_string(i));
      } else if (lo == 0.0 && f_.has_closure()) {
        fv = f_.closure_eval(lam_);
      } else {
        throw DomainError("speed '" + f_.name() + "' undefined at curvature " + format_real(lo) +
                          " (node " + std::to_string(i) + ")");
      }
    }
    out.max_speed = std::max(out.max_speed, fv);
    vel[i] = -fv * (g.L * g.inv_r);
  }

  const SpeedFunction& f_;
  bool block_;
  int n_;
  int J_;
  std::vector<double> cos_;
  std::vector<double> sin_;
  std::vector<double> inv_cs_;
  std::vector<double> lam_;
  std::vector<double> grad_;
};

// Late steps are far below ulp(t), so time is accumulated with Kahan
// compensation.
struct Clock {
  double t = 0.0;
  double carry = 0.0;
  void advance(double dt) {
    const double y = dt - carry;
    const double next = t + y;
    carry = (next - t) - y;
    t = next;
  }
};

struct Stepped {
  SymmetricProfile profile;
  double dt;
  double max_speed;
};

Stepped step_with(Kernel& kernel, const SymmetricProfile& p, const SolverConfig& cfg,
                  std::vector<double>& vel,
                  double max_dt = std::numeric_limits<double>::infinity()) {
  const auto field = kernel.velocity(p, vel, true);
  const double h = p.dtheta();
  const double dt_cfl = cfg.cfl_safety * h * h / (2 * field.max_diffusivity);
  const double dt = std::min(dt_cfl, max_dt);
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw StepFailure("degenerate time step " + format_real(dt_cfl) + " (max diffusivity " +
                      format_real(field.max_diffusivity) + ")");
  }
  std::vector<double> r(p.r().begin(), p.r().end());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += dt * vel[i];
  try {
    return {SymmetricProfile(p.n(), p.J(), std::move(r)), dt, field.max_speed};
  } catch (const GeometryError& e) {
    throw StepFailure(std::string("profile invalid after step of dt = ") + format_real(dt) +
                      " from min r = " + format_real(p.min_r()) + ": " + e.what());
  }
}

}  // namespace

void validate(const SolverConfig& cfg) {
  if (!(cfg.cfl_safety > 0.0 && cfg.cfl_safety <= 1.0)) {
    throw DomainError("solver.cfl_safety must lie in (0, 1]");
  }
  if (!(cfg.stop_min_r > 0.0 && cfg.stop_min_r < 1.0)) {
    throw DomainError("solver.stop_min_r must lie in (0, 1)");
  }
  if (!(cfg.stop_max_speed > 1.0)) throw DomainError("solver.stop_max_speed must exceed 1");
  if (cfg.max_steps <= 0) throw DomainError("solver.max_steps must be positive");
  if (cfg.record_every <= 0) throw DomainError("solver.record_every must be positive");
  if (!(cfg.stop_time > 0.0)) throw DomainError("solver.stop_time must be positive");
  if (!(cfg.stop_ratio >= 0.0)) throw DomainError("solver.stop_ratio must be >= 0");
  if (!(cfg.stop_ratio_depth > 0.0 && cfg.stop_ratio_depth < 1.0)) {
    throw DomainError("solver.stop_ratio_depth must lie in (0, 1)");
  }
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::min_radius:
      return "min-radius";
    case Termination::speed_blowup:
      return "speed-blowup";
    case Termination::max_steps:
      return "max-steps";
    case Termination::time_limit:
      return "time-limit";
  }
  return "unknown";
}

std::vector<double> radial_velocity(const SymmetricProfile& p, const SpeedFunction& f) {
  Kernel kernel(p, f);
  std::vector<double> vel;
  kernel.velocity(p, vel, false);
  return vel;
}

StepResult step(const SymmetricProfile& p, const SpeedFunction& f, const SolverConfig& cfg) {
  validate(cfg);
  Kernel kernel(p, f);
  std::vector<double> vel;
  auto s = step_with(kernel, p, cfg, vel);
  return {std::move(s.profile), s.dt};
}

FlowTrajectory run_to_extinction(const SymmetricProfile& p0, const SpeedFunction& f,
                                 const SolverConfig& cfg, const StepObserver& observer) {
  validate(cfg);
  Kernel kernel(p0, f);
  std::vector<double> vel;
  const auto field0 = kernel.velocity(p0, vel, true);

  FlowTrajectory traj{.snapshots = {},
                      .speed = f,
                      .config = cfg,
                      .initial_min_r = p0.min_r(),
                      .initial_max_r = p0.max_r(),
                      .initial_max_speed = field0.max_speed};
  double min_r_stop = cfg.stop_min_r * traj.initial_min_r;
  bool ratio_reached = !(cfg.stop_ratio > 0.0);
  const double speed_stop = cfg.stop_max_speed * traj.initial_max_speed;

  SymmetricProfile p = p0;
  Clock clock;
  Clock since;  // elapsed since the previous snapshot
  std::vector<double> gaps{0.0};
  std::int64_t k = 0;
  double speed = field0.max_speed;
  traj.snapshots.push_back({0.0, k, p});
  if (observer) observer(k, 0.0, p);
  for (;;) {
    if (!ratio_reached) {
      const auto rp = kernel.radii(p);
      if (rp.A <= cfg.stop_ratio * rp.B) {
        ratio_reached = true;
        min_r_stop = std::max(min_r_stop, cfg.stop_ratio_depth * p.min_r());
      }
    }
    if (p.min_r() < min_r_stop) {
      traj.reason = Termination::min_radius;
      break;
    }
    if (speed > speed_stop) {
      traj.reason = Termination::speed_blowup;
      break;
    }
    if (k >= cfg.max_steps) {
      traj.reason = Termination::max_steps;
      break;
    }
    if (clock.t >= cfg.stop_time) {
      traj.reason = Termination::time_limit;
      break;
    }
    auto s = step_with(kernel, p, cfg, vel, cfg.stop_time - clock.t);
    p = std::move(s.profile);
    speed = s.max_speed;  // of the pre-step state, so the check lags one step
    if (s.dt < cfg.stop_time - clock.t) {
      clock.advance(s.dt);
      since.advance(s.dt);
    } else {
      since.advance(cfg.stop_time - clock.t);
      clock = {cfg.stop_time, 0.0};
    }
    ++k;
    if (observer) observer(k, clock.t, p);
    if (k % cfg.record_every == 0) {
      traj.snapshots.push_back({clock.t, k, p, clock.carry});
      gaps.push_back(since.t);
      since = {};
    }
  }
  if (traj.snapshots.back().step != k) {
    traj.snapshots.push_back({clock.t, k, p, clock.carry});
    gaps.push_back(since.t);
  }
  for (std::size_t j = traj.snapshots.size() - 1; j-- > 0;) {
    traj.snapshots[j].to_end = traj.snapshots[j + 1].to_end + gaps[j + 1];
  }
  const double t = clock.t;

  const std::vector<double> ones(p.n(), 1.0);
  const double c = f.eval(ones);
  const double R = p.max_r();
  traj.t_low = t;
  traj.t_high = t + R * R / (2 * c);
  return traj;
}

std::vector<Snapshot> replay_interval(const FlowTrajectory& traj, std::size_t k) {
  if (k + 1 >= traj.snapshots.size()) throw RangeError("no snapshot interval at index " + std::to_string(k));
  const Snapshot& a = traj.snapshots[k];
  const Snapshot& b = traj.snapshots[k + 1];
  Kernel kernel(a.profile, traj.speed);
  std::vector<double> vel;
  std::vector<Snapshot> out;
  out.push_back(a);
  SymmetricProfile p = a.profile;
  Clock clock{a.t, a.t_carry};
  Clock since;
  const double stop = traj.config.stop_time;
  for (std::int64_t s = a.step; s < b.step; ++s) {
    auto st = step_with(kernel, p, traj.config, vel, stop - clock.t);
    p = std::move(st.profile);
    if (st.dt < stop - clock.t) {
      clock.advance(st.dt);
      since.advance(st.dt);
    } else {
      since.advance(stop - clock.t);
      clock = {stop, 0.0};
    }
    out.push_back({clock.t, s + 1, p, clock.carry, a.to_end - since.t});
  }
  return out;
}

SymmetricProfile profile_at(const FlowTrajectory& traj, double t) {
  const auto& snaps = traj.snapshots;
  if (snaps.empty() || t < snaps.front().t || t > snaps.back().t) {
    throw RangeError("time " + format_real(t) + " outside the recorded trajectory");
  }
  const auto it = std::upper_bound(snaps.begin(), snaps.end(), t,
                                   [](double x, const Snapshot& s) { return x < s.t; });
  if (it == snaps.end()) return snaps.back().profile;
  const Snapshot& b = *it;
  const Snapshot& a = *(it - 1);
  if (!(b.t > a.t)) return a.profile;
  const double w = (t - a.t) / (b.t - a.t);
  if (w == 0.0) return a.profile;
  std::vector<double> r(a.profile.m() + 1);
  for (std::size_t i = 0; i < r.size(); ++i) {
    r[i] = (1 - w) * a.profile.r(i) + w * b.profile.r(i);
  }
  return SymmetricProfile(a.profile.n(), a.profile.J(), std::move(r));
}

SnapshotStats snapshot_stats(const Snapshot& s, const SpeedFunction& f) {
  const auto& p = s.profile;
  const auto rp = major_minor_radius(p);
  SnapshotStats st{s.t, p.min_r(), p.max_r(), rp.A, rp.B,
                   std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
                   0.0};
  for (const auto& k : curvature_field(p)) {
    st.min_lambda = std::min(st.min_lambda, k.min(p.n(), p.J()));
    st.max_lambda = std::max(st.max_lambda, k.max(p.n(), p.J()));
    const auto lam = k.expand(p.n(), p.J());
    if (lam.front() > 0.0) st.f_max = std::max(st.f_max, f.eval_unchecked(lam));
  }
  return st;
}

std::string trajectory_csv(const FlowTrajectory& traj) {
  std::string out = "t,min_r,max_r,A,B,min_lambda,max_lambda,f_max\n";
  for (const auto& s : traj.snapshots) {
    const auto st = snapshot_stats(s, traj.speed);
    for (double x : {st.t, st.min_r, st.max_r, st.A, st.B, st.min_lambda, st.max_lambda}) {
      out += format_real(x);
      out += ',';
    }
    out += format_real(st.f_max);
    out += '\n';
  }
  return out;
}

void to_json(nlohmann::json& j, const SolverConfig& cfg) {
  j = {{"cfl_safety", cfg.cfl_safety},
       {"stop_min_r", cfg.stop_min_r},
       {"stop_max_speed", cfg.stop_max_speed},
       {"max_steps", cfg.max_steps},
       {"record_every", cfg.record_every}};
  if (std::isfinite(cfg.stop_time)) j["stop_time"] = cfg.stop_time;
  if (cfg.stop_ratio > 0.0) {
    j["stop_ratio"] = cfg.stop_ratio;
    j["stop_ratio_depth"] = cfg.stop_ratio_depth;
  }
}

nlohmann::json trajectory_summary(const FlowTrajectory& traj) {
  const auto& last = traj.snapshots.back();
  return {{"speed", traj.speed.name()},
          {"n", last.profile.n()},
          {"J", last.profile.J()},
          {"m", last.profile.m()},
          {"solver", traj.config},
          {"extinction_bracket", {traj.t_low, traj.t_high}},
          {"termination_reason", std::string(to_string(traj.reason))},
          {"steps", last.step},
          {"snapshots", traj.snapshots.size()},
          {"final_min_r", last.profile.min_r()},
          {"final_max_r", last.profile.max_r()}};
}

}  // namespace ovalflow
