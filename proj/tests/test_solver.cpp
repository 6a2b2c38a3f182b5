#include <doctest.h>

#include <numbers>
#include <random>

#include "ovalflow/embedding_oracle.hpp"
#include "ovalflow/errors.hpp"
#include "ovalflow/geometry.hpp"
#include "ovalflow/initdata.hpp"
#include "ovalflow/solver.hpp"
#include "support.hpp"

using namespace ovalflow;
using testing::rel_err;

namespace {

double axis_ratio_of(const SymmetricProfile& p) {
  const auto rp = major_minor_radius(p);
  return rp.A / rp.B;
}

SolverConfig quick(double stop_min_r = 0.1) {
  SolverConfig cfg;
  cfg.stop_min_r = stop_min_r;
  cfg.record_every = 50;
  return cfg;
}

}  // namespace

TEST_SUITE("solver") {
  TEST_CASE("config validation") {
    SolverConfig cfg;
    CHECK_NOTHROW(validate(cfg));
    cfg.cfl_safety = 1.5;
    CHECK_THROWS_AS(validate(cfg), DomainError);
    cfg = {};
    cfg.stop_min_r = 0.0;
    CHECK_THROWS_AS(validate(cfg), DomainError);
    cfg = {};
    cfg.max_steps = 0;
    CHECK_THROWS_AS(validate(cfg), DomainError);
    cfg = {};
    cfg.record_every = -1;
    CHECK_THROWS_AS(validate(cfg), DomainError);
    cfg = {};
    cfg.stop_time = 0.0;
    CHECK_THROWS_AS(validate(cfg), DomainError);
    cfg = {};
    cfg.stop_ratio = -1.0;
    CHECK_THROWS_AS(validate(cfg), DomainError);
    cfg = {};
    cfg.stop_ratio_depth = 1.0;
    CHECK_THROWS_AS(validate(cfg), DomainError);
  }

  TEST_CASE("sphere velocities") {
    const auto v = radial_velocity(build_sphere_profile(2, 1, 1.0, 64), make_speed("H", 2));
    for (double x : v) CHECK(x == doctest::Approx(-2.0).epsilon(1e-12));
    for (double R : {0.5, 3.0}) {
      const auto w = radial_velocity(build_sphere_profile(3, 1, R, 64), make_speed("H", 3));
      for (double x : w) CHECK(x == doctest::Approx(-3.0 / R).epsilon(1e-12));
    }
  }

  TEST_CASE("ellipsoid velocity against the embedding oracle") {
    const auto p = build_ellipsoid_profile(2, 1, 2.0, 200);
    const auto f = make_speed("H", 2);
    const auto v = radial_velocity(p, f);
    for (int i = 3; i <= p.m() - 3; ++i) {
      const auto k = embedding_oracle_curvatures(p, i);
      const auto jet = radial_jet(p, i);
      const double want = -(k.kappa_y + k.kappa_profile) * std::hypot(jet.r, jet.r_t) / jet.r;
      CHECK(rel_err(v[i], want) <= 1e-6);
    }
  }

  TEST_CASE("velocity is undefined on non-convex profiles") {
    std::vector<double> r(65);
    for (int i = 0; i <= 64; ++i) r[i] = 1.0 + 0.3 * std::cos(8 * i * (std::numbers::pi / 2) / 64);
    const SymmetricProfile wavy(2, 1, r);
    CHECK_THROWS_AS(radial_velocity(wavy, make_speed("H", 2)), DomainError);
    CHECK_THROWS_AS(step(wavy, make_speed("H", 2), {}), StepFailure);
    CHECK_THROWS_AS(radial_velocity(wavy, make_speed("H", 3)), ArityError);
  }

  TEST_CASE("one step of the unit sphere") {
    const auto s = step(build_sphere_profile(2, 1, 1.0, 100), make_speed("H", 2), {});
    CHECK(s.dt > 0.0);
    for (double r : s.profile.r()) CHECK(r == doctest::Approx(1.0 - 2.0 * s.dt).epsilon(1e-13));
  }

  TEST_CASE("step is consistent with the velocity field") {
    std::mt19937_64 rng(3);
    const auto f = make_speed("power_mean_2", 3);
    for (int k = 0; k < 5; ++k) {
      const auto p = random_convex_profile(rng, 3, 1, 64);
      const auto v = radial_velocity(p, f);
      SolverConfig cfg;
      for (double safety : {0.4, 0.04, 0.004}) {
        cfg.cfl_safety = safety;
        const auto s = step(p, f, cfg);
        for (int i = 0; i <= 64; ++i) {
          const double fd = (s.profile.r(i) - p.r(i)) / s.dt;
          CHECK(std::abs(fd - v[i]) <= 1e-8 * std::abs(v[i]) + 1e-15 / s.dt);
        }
      }
    }
  }

  TEST_CASE("shrinking sphere reaches sqrt(0.2) at t = 0.2") {
    SolverConfig cfg;
    cfg.stop_time = 0.2;
    const auto traj = run_to_extinction(build_sphere_profile(2, 1, 1.0, 100), make_speed("H", 2), cfg);
    CHECK(traj.reason == Termination::time_limit);
    CHECK(traj.snapshots.back().t == 0.2);
    for (double r : traj.snapshots.back().profile.r()) CHECK(std::abs(r - std::sqrt(0.2)) <= 1e-3);
  }

  TEST_CASE("sphere extinction bracket contains 1/4") {
    const auto traj = run_to_extinction(build_sphere_profile(2, 1, 1.0, 50), make_speed("H", 2), {});
    CHECK(traj.reason == Termination::min_radius);
    CHECK(traj.t_low <= 0.25);
    CHECK(traj.t_high >= 0.25);
    CHECK(traj.t_low == traj.snapshots.back().t);
  }

  TEST_CASE("cap extinction bracket lies in the comparison window") {
    const auto f = make_speed("H", 3);
    const auto traj = run_to_extinction(build_cap_profile(3, 2, {2.0, 0.1, 100}), f, {});
    CHECK(traj.t_low >= 1.0 / 6.0);
    CHECK(traj.t_high <= 1.44 / 4.0);
  }

  TEST_CASE("convexity and containment along random flows") {
    std::mt19937_64 rng(17);
    for (int k = 0; k < 6; ++k) {
      const auto p0 = random_convex_profile(rng, 2 + k % 2, 1, 48);
      const auto f = make_speed(k % 3 == 0 ? "H" : "l2_norm", p0.n());
      double prev_max = p0.max_r();
      double prev_min = p0.min_r();
      const double scale = p0.max_r();
      bool monotone = true;
      const auto traj = run_to_extinction(p0, f, quick(), [&](std::int64_t, double, const SymmetricProfile& p) {
        if (p.max_r() > prev_max + 1e-8 * scale || p.min_r() > prev_min + 1e-8 * scale) monotone = false;
        prev_max = p.max_r();
        prev_min = p.min_r();
      });
      CHECK(monotone);
      for (const auto& s : traj.snapshots) {
        CHECK(convexity_report(s.profile, f, 0.0).min_lambda > 0.0);
        CHECK(s.profile.min_r() > 0.0);
      }
    }
  }

  TEST_CASE("snapshot bookkeeping") {
    SolverConfig cfg = quick(0.05);
    const auto traj = run_to_extinction(build_ellipsoid_profile(2, 1, 2.0, 48), make_speed("H", 2), cfg);
    const auto& s = traj.snapshots;
    REQUIRE(s.size() > 3);
    CHECK(s.back().to_end == 0.0);
    for (std::size_t k = 1; k < s.size(); ++k) {
      CHECK(s[k].t > s[k - 1].t);
      CHECK(s[k].to_end < s[k - 1].to_end);
      CHECK(s[k].to_end + s[k].t == doctest::Approx(s.back().t).epsilon(1e-12));
      if (k + 1 < s.size()) CHECK(s[k].step % cfg.record_every == 0);
    }
  }

  TEST_CASE("replay reproduces recorded snapshots exactly") {
    const auto traj = run_to_extinction(build_ellipsoid_profile(2, 1, 3.0, 40), make_speed("H", 2), quick());
    for (std::size_t k : {std::size_t{0}, traj.snapshots.size() / 2, traj.snapshots.size() - 2}) {
      const auto fine = replay_interval(traj, k);
      const auto& b = traj.snapshots[k + 1];
      REQUIRE(fine.back().step == b.step);
      CHECK(fine.back().t == b.t);
      for (int i = 0; i <= 40; ++i) CHECK(fine.back().profile.r(i) == b.profile.r(i));
      CHECK(fine.back().to_end == doctest::Approx(b.to_end).epsilon(1e-10));
    }
    CHECK_THROWS_AS(replay_interval(traj, traj.snapshots.size() - 1), RangeError);
  }

  TEST_CASE("profile interpolation in time") {
    const auto traj = run_to_extinction(build_sphere_profile(2, 1, 1.0, 32), make_speed("H", 2), quick());
    const auto& a = traj.snapshots[1];
    const auto p = profile_at(traj, a.t);
    CHECK(p.r(0) == a.profile.r(0));
    CHECK_THROWS_AS(profile_at(traj, -1e-3), RangeError);
    CHECK_THROWS_AS(profile_at(traj, traj.t_low + 1.0), RangeError);
    const double mid = 0.5 * (traj.snapshots[1].t + traj.snapshots[2].t);
    const auto q = profile_at(traj, mid);
    CHECK(q.r(5) < traj.snapshots[1].profile.r(5));
    CHECK(q.r(5) > traj.snapshots[2].profile.r(5));
  }

  TEST_CASE("ratio stop ends the run a fixed depth below the crossing") {
    const auto f = make_speed("H", 2);
    SolverConfig cfg = quick(1e-6);
    cfg.stop_ratio = 2.0;
    cfg.stop_ratio_depth = 0.5;
    double at_cross = 0.0;
    double last_min = 0.0;
    double prev_min = 0.0;
    const auto traj = run_to_extinction(build_ellipsoid_profile(2, 1, 4.0, 32), f, cfg,
                                        [&](std::int64_t, double, const SymmetricProfile& p) {
                                          const auto rp = major_minor_radius(p);
                                          if (at_cross == 0.0 && rp.A <= 2.0 * rp.B) at_cross = p.min_r();
                                          prev_min = last_min;
                                          last_min = p.min_r();
                                        });
    REQUIRE(at_cross > 0.0);
    CHECK(traj.reason == Termination::min_radius);
    CHECK(last_min < 0.5 * at_cross);
    CHECK(prev_min >= 0.5 * at_cross);
    CHECK(axis_ratio_of(traj.snapshots.back().profile) <= 2.0);

    // without the ratio stop the same run goes much deeper
    const auto full = run_to_extinction(build_ellipsoid_profile(2, 1, 4.0, 32), f, quick(1e-6));
    CHECK(full.snapshots.back().profile.min_r() < 0.01 * last_min);
    CHECK(trajectory_summary(traj)["solver"]["stop_ratio"] == 2.0);
  }

  TEST_CASE("max-steps termination") {
    SolverConfig cfg;
    cfg.max_steps = 10;
    cfg.record_every = 3;
    const auto traj = run_to_extinction(build_sphere_profile(2, 1, 1.0, 32), make_speed("H", 2), cfg);
    CHECK(traj.reason == Termination::max_steps);
    CHECK(traj.snapshots.back().step == 10);
    CHECK(traj.snapshots.size() == 5);  // 0, 3, 6, 9, 10
  }

  TEST_CASE("flow is covariant under parabolic scaling") {
    const auto f = make_speed("H", 2);
    const auto p0 = build_ellipsoid_profile(2, 1, 2.0, 40);
    const double c = 2.0;  // powers of two keep the arithmetic exact
    const auto a = run_to_extinction(p0, f, quick());
    const auto b = run_to_extinction(p0.scaled(c), f, quick());
    REQUIRE(a.snapshots.size() == b.snapshots.size());
    for (std::size_t k = 0; k < a.snapshots.size(); ++k) {
      CHECK(b.snapshots[k].t == c * c * a.snapshots[k].t);
      CHECK(b.snapshots[k].profile.r(7) == c * a.snapshots[k].profile.r(7));
    }
  }

  TEST_CASE("exchange symmetry is preserved when J = n - J - 1") {
    std::vector<double> r(65);
    for (int i = 0; i <= 64; ++i) r[i] = 1.0 + 0.05 * std::cos(4 * i * (std::numbers::pi / 2) / 64);
    const SymmetricProfile p0(3, 1, r);
    SolverConfig cfg = quick(0.2);
    const auto traj = run_to_extinction(p0, make_speed("H", 3), cfg);
    for (const auto& s : traj.snapshots) {
      for (int i = 0; i <= 64; ++i) {
        CHECK(std::abs(s.profile.r(i) - s.profile.r(64 - i)) <= 1e-10 * s.profile.max_r());
      }
    }
  }

  TEST_CASE("grid refinement moves the midpoint by less than the bracket width") {
    const auto f = make_speed("H", 2);
    for (const double a : {1.0, 2.0}) {
      CAPTURE(a);
      const auto coarse = run_to_extinction(build_ellipsoid_profile(2, 1, a, 50), f, quick());
      const auto fine = run_to_extinction(build_ellipsoid_profile(2, 1, a, 100), f, quick());
      const double width = fine.t_high - fine.t_low;
      CHECK(std::abs(fine.extinction_midpoint() - coarse.extinction_midpoint()) < width);
    }
  }

  TEST_CASE("trajectory export") {
    const auto traj = run_to_extinction(build_sphere_profile(2, 1, 1.0, 32), make_speed("H", 2), quick(0.5));
    const auto csv = trajectory_csv(traj);
    CHECK(csv.rfind("t,min_r,max_r,A,B,min_lambda,max_lambda,f_max\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(traj.snapshots.size() + 1));
    const auto j = trajectory_summary(traj);
    CHECK(j["termination_reason"] == "min-radius");
    CHECK(j["solver"]["cfl_safety"] == 0.4);
    CHECK_FALSE(j["solver"].contains("stop_time"));
  }
}
