#include <doctest.h>

#include <numbers>
#include <random>

#include "ovalflow/errors.hpp"
#include "ovalflow/geometry.hpp"
#include "ovalflow/initdata.hpp"
#include "support.hpp"

using namespace ovalflow;
using testing::rel_err;

namespace {

// Closed-form curvatures of |y|^2 + |z|^2 / a^2 = 1 at the boundary point on
// the ray of angle theta.
CurvatureSpectrum ellipsoid_exact(double a, double theta) {
  const double r = 1.0 / std::sqrt(std::pow(std::cos(theta), 2) + std::pow(std::sin(theta) / a, 2));
  const double u = r * std::cos(theta);
  const double v = r * std::sin(theta);
  const double g = std::sqrt(u * u + v * v / std::pow(a, 4));
  // planar curvature of (cos phi, a sin phi)
  const double c = u;
  const double s = v / a;
  const double kp = a / std::pow(a * a * c * c + s * s, 1.5);
  return {1.0 / g, 1.0 / (a * a * g), kp};
}

double max_channel_error(const SymmetricProfile& p, double a) {
  double worst = 0.0;
  for (int i = 0; i <= p.m(); ++i) {
    const auto got = curvature_spectrum(p, i);
    const auto want = ellipsoid_exact(a, p.theta(i));
    worst = std::max({worst, rel_err(got.kappa_y, want.kappa_y), rel_err(got.kappa_z, want.kappa_z),
                      rel_err(got.kappa_profile, want.kappa_profile)});
  }
  return worst;
}

}  // namespace

TEST_SUITE("geometry") {
  TEST_CASE("profile invariants are enforced") {
    CHECK_THROWS_AS(SymmetricProfile(2, 1, {1.0, 0.0, 1.0}), GeometryError);
    CHECK_THROWS_AS(SymmetricProfile(2, 1, {1.0, -1.0, 1.0}), GeometryError);
    CHECK_THROWS_AS(SymmetricProfile(2, 1, {1.0, NAN, 1.0}), GeometryError);
    CHECK_THROWS_AS(SymmetricProfile(2, 1, {1.0, 1.0}), GeometryError);
    CHECK_THROWS_AS(SymmetricProfile(2, 2, {1.0, 1.0, 1.0}), ArityError);
    CHECK_THROWS_AS(SymmetricProfile(3, 0, {1.0, 1.0, 1.0}), ArityError);
  }

  TEST_CASE("spheres have equal channels") {
    for (double R : {1.0, 0.25, 3.0}) {
      const auto p = build_sphere_profile(4, 2, R, 50);
      for (int i = 0; i <= p.m(); ++i) {
        const auto k = curvature_spectrum(p, i);
        CHECK(rel_err(k.kappa_y, 1.0 / R) <= 1e-10);
        CHECK(rel_err(k.kappa_z, 1.0 / R) <= 1e-10);
        CHECK(rel_err(k.kappa_profile, 1.0 / R) <= 1e-10);
      }
    }
  }

  TEST_CASE("expanded spectrum has the right multiplicities") {
    const CurvatureSpectrum k{2.0, 3.0, 1.0};
    CHECK(k.expand(5, 2) == std::vector<double>{1.0, 2.0, 2.0, 3.0, 3.0});
    CHECK(k.expand(2, 1) == std::vector<double>{1.0, 2.0});
    CHECK(k.min(5, 2) == 1.0);
    CHECK(k.max(2, 1) == 2.0);
  }

  TEST_CASE("ellipsoid curvatures approach the closed form at second order") {
    const double e200 = max_channel_error(build_ellipsoid_profile(3, 1, 2.0, 200), 2.0);
    const double e400 = max_channel_error(build_ellipsoid_profile(3, 1, 2.0, 400), 2.0);
    CHECK(e400 < 1e-4);
    CHECK(e200 / e400 > 3.5);
  }

  TEST_CASE("scaling covariance") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 20; ++trial) {
      const auto p = random_convex_profile(rng, 3, 1, 64);
      const double c = 0.3 + 0.2 * trial;
      const auto q = p.scaled(c);
      for (int i = 0; i <= p.m(); ++i) {
        const auto a = curvature_spectrum(p, i);
        const auto b = curvature_spectrum(q, i);
        CHECK(rel_err(b.kappa_y, a.kappa_y / c) <= 1e-10);
        CHECK(rel_err(b.kappa_z, a.kappa_z / c) <= 1e-10);
        CHECK(rel_err(b.kappa_profile, a.kappa_profile / c) <= 1e-10);
      }
      const auto r1 = major_minor_radius(p);
      const auto r2 = major_minor_radius(q);
      CHECK(rel_err(r2.A, c * r1.A) <= 1e-14);
      CHECK(rel_err(r2.B, c * r1.B) <= 1e-14);
    }
  }

  TEST_CASE("major and minor radii") {
    const auto s = major_minor_radius(build_sphere_profile(2, 1, 1.0, 40));
    CHECK(s.A == 1.0);
    CHECK(s.B == 1.0);
    const auto e = major_minor_radius(build_ellipsoid_profile(2, 1, 2.0, 40));
    CHECK(e.A == 2.0);
    CHECK(e.B == 1.0);
  }

  TEST_CASE("distance to spheres and cylinders") {
    const auto unit = build_sphere_profile(2, 1, 1.0, 64);
    const auto big = build_sphere_profile(2, 1, 3.0, 64);
    // polylines: a vertex of one against the chord of the other
    const double h = unit.dtheta();
    CHECK(hypersurface_distance(unit, big) == doctest::Approx(2.0 * std::cos(h / 2)).epsilon(1e-12));
    CHECK(hypersurface_distance(unit, SphereShape{3.0}) == doctest::Approx(2.0).epsilon(1e-12));
    for (int J : {1, 2}) {
      const auto p = build_sphere_profile(3, J, 1.0, 64);
      CHECK(hypersurface_distance(p, CylinderShape{4.0}) == doctest::Approx(3.0).epsilon(1e-12));
    }
  }

  TEST_CASE("mismatched profiles are rejected") {
    const auto p = build_sphere_profile(2, 1, 1.0, 64);
    CHECK_THROWS_AS(hypersurface_distance(p, build_sphere_profile(3, 1, 2.0, 64)), ArityError);
    CHECK_THROWS_AS(hypersurface_distance(p, build_sphere_profile(3, 2, 2.0, 64)), ArityError);
  }

  TEST_CASE("intersecting curves are at distance zero") {
    const auto e = build_ellipsoid_profile(2, 1, 2.0, 64);
    const auto s = build_sphere_profile(2, 1, 1.5, 64);
    CHECK(hypersurface_distance(e, s) == 0.0);
    CHECK(nesting(e, s) == Nesting::intersecting);
  }

  TEST_CASE("distance matches dense brute-force sampling and is symmetric") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 12; ++trial) {
      const auto p = random_convex_profile(rng, 2, 1, 48);
      const auto shape = random_convex_profile(rng, 2, 1, 48);
      double need = 0.0;
      for (int i = 0; i <= 48; ++i) need = std::max(need, p.r(i) / shape.r(i));
      const auto q = shape.scaled(need * (1.05 + 0.03 * trial));
      const double d = hypersurface_distance(p, q);
      CHECK(d == hypersurface_distance(q, p));
      const double oracle =
          testing::brute_distance(testing::dense_curve(p, 10), testing::dense_curve(q, 10));
      CHECK(std::abs(d - oracle) <= 1e-3);
      CHECK(d <= oracle + 1e-12);
      CHECK(nesting(p, q) == Nesting::p_inside_q);
      CHECK(nesting(q, p) == Nesting::q_inside_p);
    }
  }

  TEST_CASE("polyline radius interpolates the ray") {
    const auto p = build_sphere_profile(2, 1, 2.0, 32);
    CHECK(polyline_radius(p, 0.0) == doctest::Approx(2.0));
    CHECK(polyline_radius(p, std::numbers::pi / 2) == doctest::Approx(2.0));
    // a chord of the circle dips below the radius between nodes
    const double mid = 0.5 * p.dtheta();
    CHECK(polyline_radius(p, mid) == doctest::Approx(2.0 * std::cos(mid)).epsilon(1e-12));
  }

  TEST_CASE("inscribed radius of a sphere is its radius") {
    const auto p = build_sphere_profile(2, 1, 1.5, 64);
    for (int i : {0, 17, 32, 64}) CHECK(inscribed_radius(p, i) == doctest::Approx(1.5).epsilon(1e-6));
  }

  TEST_CASE("convexity report of the unit sphere") {
    const auto p = build_sphere_profile(3, 1, 1.0, 64);
    const auto rep = convexity_report(p, make_speed("H", 3), 0.5);
    CHECK(rep.min_lambda == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(rep.strictly_convex);
    CHECK(rep.c2_ratio_min == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(rep.c2_pass);
    // tangent ball of radius 1 times f = 3
    CHECK(rep.c3_kappa_min == doctest::Approx(3.0).epsilon(1e-6));
  }

  TEST_CASE("convexity report of the cap and of a non-convex profile") {
    const auto cap = build_cap_profile(2, 1, {4.0, 0.1, 400});
    CHECK(convexity_report(cap, make_speed("H", 2), 0.0).min_lambda > 0.0);

    std::vector<double> r(65);
    for (int i = 0; i <= 64; ++i) {
      const double th = i * (std::numbers::pi / 2) / 64;
      r[i] = 1.0 + 0.3 * std::cos(8 * th);
    }
    const SymmetricProfile wavy(2, 1, r);
    const auto rep = convexity_report(wavy, make_speed("H", 2), 0.0);
    CHECK_FALSE(rep.strictly_convex);
    CHECK(rep.min_lambda < 0.0);
  }

  TEST_CASE("non-collapsing constant of thin ellipsoids stays above a floor") {
    const auto f = make_speed("H", 2);
    std::vector<double> kappa;
    for (double a : {5.0, 10.0, 20.0}) {
      kappa.push_back(convexity_report(build_ellipsoid_profile(2, 1, a, 400), f, 0.0).c3_kappa_min);
    }
    const double floor = kappa.front() / 2;
    for (double k : kappa) CHECK(k >= floor);
  }
}
