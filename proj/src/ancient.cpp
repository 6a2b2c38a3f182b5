#include "ovalflow/ancient.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ovalflow/errors.hpp"
#include "ovalflow/geometry.hpp"
#include "ovalflow/profile_io.hpp"

namespace ovalflow {

double axis_ratio(const SymmetricProfile& p) {
  const auto rp = major_minor_radius(p);
  return rp.A / rp.B;
}

Normalization normalization_scale(const FlowTrajectory& traj) {
  const auto& snaps = traj.snapshots;
  if (snaps.empty()) throw NormalizationError("empty trajectory");
  const double r0 = axis_ratio(snaps.front().profile);
  if (r0 < 2.0) {
    throw NormalizationError("A/B starts at " + format_real(r0) + ", below 2");
  }
  std::size_t k = 0;
  while (k < snaps.size() && axis_ratio(snaps[k].profile) > 2.0) ++k;
  if (k == snaps.size()) {
    throw NormalizationError("A/B never comes down to 2 (final value " +
                             format_real(axis_ratio(snaps.back().profile)) + ")");
  }

  double t2 = snaps[k].t;
  double to_end2 = snaps[k].to_end;
  if (k > 0) {
    const auto fine = replay_interval(traj, k - 1);
    std::size_t j = 1;
    while (j + 1 < fine.size() && axis_ratio(fine[j].profile) > 2.0) ++j;
    const double ra = axis_ratio(fine[j - 1].profile);
    const double rb = axis_ratio(fine[j].profile);
    const double w = ra > rb ? std::clamp((ra - 2.0) / (ra - rb), 0.0, 1.0) : 1.0;
    t2 = fine[j - 1].t + w * (fine[j].t - fine[j - 1].t);
    to_end2 = fine[j - 1].to_end + w * (fine[j].to_end - fine[j - 1].to_end);
  }

  const double half = 0.5 * (traj.t_high - traj.t_low);
  Normalization out;
  out.t2 = t2;
  out.T = traj.t_low + half;
  out.Lambda = 1.0 / std::sqrt(to_end2 + half);
  out.Lambda_from_low =
      to_end2 > 0 ? 1.0 / std::sqrt(to_end2) : std::numeric_limits<double>::infinity();
  out.Lambda_from_high = 1.0 / std::sqrt(to_end2 + 2 * half);
  return out;
}

RescaledTrajectory rescale(std::shared_ptr<const FlowTrajectory> traj) {
  if (!traj) throw NormalizationError("null trajectory");
  RescaledTrajectory rt{traj, normalization_scale(*traj), 0.0, {}};
  const double L = rt.norm.Lambda;
  const double L2 = L * L;
  const double half = 0.5 * (traj->t_high - traj->t_low);
  rt.T_hat = -L2 * rt.norm.T;
  rt.snapshots.reserve(traj->snapshots.size());
  for (const auto& s : traj->snapshots) {
    rt.snapshots.push_back({-L2 * (s.to_end + half), s.profile.scaled(L)});
  }
  return rt;
}

double RescaledTrajectory::max_K() const {
  return snapshots.empty() ? 0.0 : std::sqrt(-snapshots.front().t_hat);
}

SymmetricProfile RescaledTrajectory::profile_at(double t_hat) const {
  if (!snapshots.empty()) {
    // Data that starts at ratio 2 begins at t_hat = -1 up to rounding.
    const double lo = snapshots.front().t_hat;
    const double hi = snapshots.back().t_hat;
    const double slack = 1e-12 * std::max(1.0, std::abs(lo));
    if (t_hat < lo && t_hat >= lo - slack) t_hat = lo;
    if (t_hat > hi && t_hat <= hi + slack) t_hat = hi;
  }
  if (snapshots.empty() || t_hat < snapshots.front().t_hat || t_hat > snapshots.back().t_hat) {
    throw RangeError("rescaled time " + format_real(t_hat) + " outside [" +
                     format_real(snapshots.empty() ? 0.0 : snapshots.front().t_hat) + ", " +
                     format_real(snapshots.empty() ? 0.0 : snapshots.back().t_hat) + "]");
  }
  const auto it = std::upper_bound(snapshots.begin(), snapshots.end(), t_hat,
                                   [](double x, const RescaledSnapshot& s) { return x < s.t_hat; });
  if (it == snapshots.end()) return snapshots.back().profile;
  const auto& b = *it;
  const auto& a = *(it - 1);
  const double w = (t_hat - a.t_hat) / (b.t_hat - a.t_hat);
  std::vector<double> r(a.profile.m() + 1);
  for (std::size_t i = 0; i < r.size(); ++i) {
    r[i] = (1 - w) * a.profile.r(i) + w * b.profile.r(i);
  }
  return SymmetricProfile(a.profile.n(), a.profile.J(), std::move(r));
}

FlowTrajectory RescaledTrajectory::as_flow_trajectory() const {
  const double L = norm.Lambda;
  const double L2 = L * L;
  FlowTrajectory out = *base;
  for (std::size_t k = 0; k < out.snapshots.size(); ++k) {
    auto& s = out.snapshots[k];
    s.t *= L2;
    s.t_carry *= L2;
    s.to_end *= L2;
    s.profile = snapshots[k].profile;
  }
  out.t_low *= L2;
  out.t_high *= L2;
  if (std::isfinite(out.config.stop_time)) out.config.stop_time *= L2;
  out.initial_min_r *= L;
  out.initial_max_r *= L;
  out.initial_max_speed /= L;
  return out;
}

double diameter_at_minus_one(const RescaledTrajectory& rt) {
  return 2.0 * rt.profile_at(-1.0).max_r();
}

FamilyDiagnostics d1_d2_diagnostics(const std::vector<const RescaledTrajectory*>& family,
                                    const std::vector<double>& parameters) {
  if (family.size() != parameters.size()) {
    throw ArityError("family and parameter lists differ in length");
  }
  FamilyDiagnostics d;
  if (family.empty()) return d;
  const auto& ref = family.front()->snapshots.front().profile;
  const std::string& speed = family.front()->base->speed.name();
  for (const auto* rt : family) {
    const auto& p = rt->snapshots.front().profile;
    if (p.n() != ref.n() || p.J() != ref.J() || p.m() != ref.m() || rt->base->speed.name() != speed) {
      throw ArityError("family members differ in (n, J, m, speed)");
    }
  }
  std::vector<std::size_t> order(family.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return parameters[a] < parameters[b]; });
  for (std::size_t i : order) {
    d.parameters.push_back(parameters[i]);
    d.diameters.push_back(diameter_at_minus_one(*family[i]));
    d.T_hat.push_back(family[i]->T_hat);
  }
  const double d0 = d.diameters.front();
  d.C_low = 0.5 * d0;
  d.C_high = 2.0 * d0;
  d.d1_pass = std::all_of(d.diameters.begin(), d.diameters.end(),
                          [&](double x) { return x >= d.C_low && x <= d.C_high; });
  d.d2_pass = true;
  for (std::size_t k = 1; k < d.T_hat.size(); ++k) {
    if (!(std::abs(d.T_hat[k]) > std::abs(d.T_hat[k - 1]))) d.d2_pass = false;
  }
  return d;
}

SymmetricProfile backward_rescale(const RescaledTrajectory& rt, double K) {
  if (!(K >= 1.0) || !std::isfinite(K)) throw DomainError("K must be >= 1");
  double t_hat = -K * K;
  if (!rt.snapshots.empty() && K <= rt.max_K()) {
    t_hat = std::max(t_hat, rt.snapshots.front().t_hat);  // K = max_K() after rounding
  }
  if (rt.snapshots.empty() || t_hat < rt.snapshots.front().t_hat) {
    throw RangeError("K = " + format_real(K) + " needs rescaled time " + format_real(t_hat) +
                     "; the largest available K is " + format_real(rt.max_K()));
  }
  return rt.profile_at(t_hat).scaled(1.0 / K);
}

CylinderFit cylinder_fit(const SymmetricProfile& p, ThetaWindow window) {
  std::vector<int> nodes;
  for (int i = 0; i <= p.m(); ++i) {
    if (p.theta(i) >= window.lo && p.theta(i) <= window.hi) nodes.push_back(i);
  }
  if (nodes.empty()) throw DomainError("cylinder-fit window contains no grid node");
  double sum = 0.0;
  for (int i : nodes) sum += p.u(i);
  CylinderFit fit{sum / static_cast<double>(nodes.size()), 0.0, 0.0};
  const bool use_z = p.mult_z() > 0;
  for (int i : nodes) {
    fit.max_deviation = std::max(fit.max_deviation, std::abs(p.u(i) - fit.radius) / fit.radius);
    const auto k = curvature_spectrum(p, i);
    const double off = (use_z ? std::abs(k.kappa_z) : 0.0) + std::abs(k.kappa_profile);
    fit.flatness = std::max(fit.flatness, off / k.kappa_y);
  }
  return fit;
}

double roundness_ratio(const SymmetricProfile& p) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& k : curvature_field(p)) {
    lo = std::min(lo, k.min(p.n(), p.J()));
    hi = std::max(hi, k.max(p.n(), p.J()));
  }
  if (!(lo > 0.0)) {
    throw DomainError("roundness ratio needs positive curvature; min is " + format_real(lo));
  }
  return hi / lo;
}

std::string ratio_curve_csv(const RescaledTrajectory& rt) {
  std::string out = "t_hat,ratio\n";
  for (const auto& s : rt.snapshots) {
    out += format_real(s.t_hat);
    out += ',';
    out += format_real(axis_ratio(s.profile));
    out += '\n';
  }
  return out;
}

nlohmann::json rescaled_summary(const RescaledTrajectory& rt) {
  nlohmann::json j = {{"T", rt.norm.T},
                      {"t2", rt.norm.t2},
                      {"Lambda", rt.norm.Lambda},
                      {"Lambda_from_bracket_low", rt.norm.Lambda_from_low},
                      {"Lambda_from_bracket_high", rt.norm.Lambda_from_high},
                      {"T_hat", rt.T_hat},
                      {"max_K", rt.max_K()}};
  const auto p = rt.profile_at(-1.0);
  j["diameter_at_minus_one"] = 2.0 * p.max_r();
  j["ratio_at_minus_one"] = axis_ratio(p);
  return j;
}

void to_json(nlohmann::json& j, const FamilyDiagnostics& d) {
  j = {{"parameters", d.parameters}, {"diameters", d.diameters}, {"T_hat", d.T_hat},
       {"C_low", d.C_low},           {"C_high", d.C_high},       {"d1_pass", d.d1_pass},
       {"d2_pass", d.d2_pass}};
}

void to_json(nlohmann::json& j, const CylinderFit& c) {
  j = {{"radius", c.radius}, {"max_deviation", c.max_deviation}, {"flatness", c.flatness}};
}

}  // namespace ovalflow
