#include <doctest.h>

#include <numbers>

#include "ovalflow/ancient.hpp"
#include "ovalflow/errors.hpp"
#include "ovalflow/geometry.hpp"
#include "ovalflow/initdata.hpp"
#include "support.hpp"

using namespace ovalflow;

namespace {

SolverConfig deep() {
  SolverConfig cfg;
  cfg.stop_min_r = 1e-3;
  cfg.record_every = 20;
  return cfg;
}

FlowTrajectory ellipsoid_run(double a, int m = 64, double scale = 1.0) {
  return run_to_extinction(build_ellipsoid_profile(2, 1, a, m).scaled(scale), make_speed("H", 2),
                           deep());
}

const RescaledTrajectory& a4() {
  static const RescaledTrajectory rt = rescale(ellipsoid_run(4.0));
  return rt;
}

// Profile with u = R on theta <= 0.7, closed off by a circular arc.
SymmetricProfile slab(double R, int m) {
  std::vector<double> r(m + 1);
  const double cut = 0.7;
  const double rc = R / std::cos(cut);
  for (int i = 0; i <= m; ++i) {
    const double th = i * (std::numbers::pi / 2) / m;
    r[i] = th <= cut ? R / std::cos(th) : rc;
  }
  return SymmetricProfile(2, 1, std::move(r));
}

}  // namespace

TEST_SUITE("ancient") {
  TEST_CASE("axis ratio is scale invariant") {
    const auto p = build_cap_profile(2, 1, {3.0, 0.1, 100});
    CHECK(axis_ratio(p.scaled(2.0)) == axis_ratio(p));
    CHECK(axis_ratio(p.scaled(0.25)) == axis_ratio(p));
    CHECK(axis_ratio(p.scaled(3.7)) == doctest::Approx(axis_ratio(p)).epsilon(1e-15));
  }

  TEST_CASE("normalization needs a ratio that starts at 2 or more and comes down to 2") {
    const auto f = make_speed("H", 2);
    CHECK_THROWS_AS(normalization_scale(run_to_extinction(build_sphere_profile(2, 1, 1.0, 32), f, deep())),
                    NormalizationError);
    CHECK_THROWS_AS(normalization_scale(ellipsoid_run(1.5, 32)), NormalizationError);
    SolverConfig shallow = deep();
    shallow.stop_min_r = 0.9;  // stops long before the ratio falls
    CHECK_THROWS_AS(
        normalization_scale(run_to_extinction(build_ellipsoid_profile(2, 1, 4.0, 32), f, shallow)),
        NormalizationError);
  }

  TEST_CASE("ellipsoid a = 4: ratio 2 lands at rescaled time -1") {
    const auto& rt = a4();
    CHECK(rt.Lambda() > 0.0);
    CHECK(rt.T_hat < -1.0);
    CHECK(axis_ratio(rt.profile_at(-1.0)) == doctest::Approx(2.0).epsilon(1e-3));
    CHECK(rt.norm.t2 < rt.norm.T);
    CHECK(rt.norm.Lambda_from_high <= rt.Lambda());
    CHECK(rt.norm.Lambda_from_low >= rt.Lambda());
    CHECK(rt.snapshots.front().t_hat == doctest::Approx(rt.T_hat).epsilon(1e-9));
    for (std::size_t k = 1; k < rt.snapshots.size(); ++k) {
      CHECK(rt.snapshots[k].t_hat > rt.snapshots[k - 1].t_hat);
    }
  }

  TEST_CASE("data starting at ratio 2 begins at rescaled time -1") {
    const auto rt = rescale(ellipsoid_run(2.0, 48));
    CHECK(rt.T_hat == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(axis_ratio(rt.profile_at(-1.0)) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(rt.max_K() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_NOTHROW(backward_rescale(rt, 1.0));
  }

  TEST_CASE("rescaling is covariant under parabolic scaling of the data") {
    const auto& a = a4();
    const auto b = rescale(ellipsoid_run(4.0, 64, 2.0));
    CHECK(b.Lambda() == a.Lambda() / 2);
    CHECK(b.T_hat == a.T_hat);
    REQUIRE(b.snapshots.size() == a.snapshots.size());
    for (std::size_t k = 0; k < a.snapshots.size(); k += 7) {
      CHECK(b.snapshots[k].t_hat == a.snapshots[k].t_hat);
      for (int i = 0; i <= 64; i += 8) CHECK(b.snapshots[k].profile.r(i) == a.snapshots[k].profile.r(i));
    }
  }

  TEST_CASE("normalizing a normalized trajectory is the identity") {
    const auto again = rescale(a4().as_flow_trajectory());
    CHECK(again.Lambda() == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(again.T_hat == doctest::Approx(a4().T_hat).epsilon(1e-6));
  }

  TEST_CASE("backward rescaling") {
    const auto& rt = a4();
    const auto k1 = backward_rescale(rt, 1.0);
    const auto at = rt.profile_at(-1.0);
    for (int i = 0; i <= 64; ++i) CHECK(k1.r(i) == at.r(i));
    CHECK_THROWS_AS(backward_rescale(rt, 0.5), DomainError);
    CHECK_THROWS_AS(backward_rescale(rt, rt.max_K() * 1.01), RangeError);
    CHECK_NOTHROW(backward_rescale(rt, rt.max_K()));
    CHECK(rt.max_K() == doctest::Approx(std::sqrt(-rt.T_hat)).epsilon(1e-9));
  }

  TEST_CASE("backward rescaling of a self-similar family returns its unit-time radius") {
    // Shapes of radius sqrt(2 c |t_hat|), the cylinder law with c = c_J0 = 1.
    RescaledTrajectory rt{nullptr, {}, -20.0, {}};
    for (double t : {-20.0, -16.0, -9.0, -4.0, -2.5, -1.0}) {
      rt.snapshots.push_back({t, build_sphere_profile(2, 1, std::sqrt(-2.0 * t), 16)});
    }
    for (double K : {1.0, 2.0, 4.0}) {
      const auto p = backward_rescale(rt, K);
      CHECK(p.r(0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    }
  }

  TEST_CASE("cylinder fit") {
    const auto p = slab(0.8, 200);
    const auto fit = cylinder_fit(p, {0.0, 0.5});
    CHECK(std::abs(fit.radius - 0.8) <= 1e-14);
    CHECK(fit.max_deviation <= 1e-14);
    // curvatures come from finite differences of r, hence the looser bound
    CHECK(fit.flatness <= 1e-4);

    const auto sphere = cylinder_fit(build_sphere_profile(3, 1, 1.0, 400), {0.0, 0.1});
    CHECK(sphere.max_deviation <= 1 - std::cos(0.1));
    CHECK(sphere.flatness == doctest::Approx(2.0).epsilon(1e-8));
    // without z-sphere directions only the profile curvature counts
    CHECK(cylinder_fit(build_sphere_profile(2, 1, 1.0, 400), {0.0, 0.1}).flatness ==
          doctest::Approx(1.0).epsilon(1e-8));
    CHECK_THROWS_AS(cylinder_fit(p, {0.3, 0.3001}), DomainError);
  }

  TEST_CASE("roundness ratio") {
    CHECK(roundness_ratio(build_sphere_profile(3, 1, 2.0, 64)) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(roundness_ratio(build_ellipsoid_profile(2, 1, 2.0, 400)) == doctest::Approx(8.0).epsilon(1e-3));
    std::vector<double> r(65);
    for (int i = 0; i <= 64; ++i) r[i] = 1.0 + 0.3 * std::cos(8 * i * (std::numbers::pi / 2) / 64);
    CHECK_THROWS_AS(roundness_ratio(SymmetricProfile(2, 1, r)), DomainError);
  }

  TEST_CASE("family diagnostics") {
    const auto b = rescale(ellipsoid_run(3.0));
    const auto d = d1_d2_diagnostics({&a4(), &b}, {4.0, 3.0});
    CHECK(d.parameters == std::vector<double>{3.0, 4.0});
    CHECK(d.d2_pass);
    CHECK(std::abs(d.T_hat[1]) > std::abs(d.T_hat[0]));
    CHECK(d.C_low == doctest::Approx(d.diameters[0] / 2));
    CHECK(d.C_high == doctest::Approx(d.diameters[0] * 2));
    CHECK(d.d1_pass);

    const auto single = d1_d2_diagnostics({&b}, {3.0});
    CHECK(single.d1_pass);
    CHECK(single.d2_pass);

    const auto other_grid = rescale(ellipsoid_run(3.0, 48));
    CHECK_THROWS_AS(d1_d2_diagnostics({&b, &other_grid}, {3.0, 4.0}), ArityError);
    CHECK_THROWS_AS(d1_d2_diagnostics({&b}, {3.0, 4.0}), ArityError);
  }

  TEST_CASE("exports") {
    const auto csv = ratio_curve_csv(a4());
    CHECK(csv.rfind("t_hat,ratio\n", 0) == 0);
    const auto j = rescaled_summary(a4());
    CHECK(j["ratio_at_minus_one"].get<double>() == doctest::Approx(2.0).epsilon(1e-3));
    CHECK(j["T_hat"].get<double>() < -1.0);
  }
}
