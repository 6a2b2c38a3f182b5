#include "ovalflow/initdata.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <tuple>

#include "ovalflow/errors.hpp"
#include "ovalflow/interp.hpp"

namespace ovalflow {
namespace {

constexpr double kHalfPi = std::numbers::pi / 2;

// Slope the cap hands to the neck at s = a, as a multiple of epsilon0. A
// steeper joint leaves room for psi'' < 0 on [0, a] for every a >= 1.
constexpr double kJointSlopeFactor = 2.2;

double bisect(const std::function<double(double)>& g, double lo, double hi, bool geometric) {
  double glo = g(lo);
  for (int it = 0; it < 200; ++it) {
    const double mid = geometric ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
    const double gm = g(mid);
    if ((gm < 0) == (glo < 0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-15 * std::max(1.0, std::abs(hi))) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

CapFunction::CapFunction(const CapSpec& spec) : spec_(spec) {
  const double a = spec.a;
  const double eps = spec.epsilon0;
  if (!(a >= 1.0) || !std::isfinite(a)) throw DomainError("cap half-length a must be >= 1");
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("cap bulge epsilon0 must lie in (0, 1)");

  // Ellipse arc psi*(t) = sqrt((1 - rho^2) / (1 - rho0^2)), rho = (t + sigma)/(1 + sigma).
  // Its slope at t = 0 grows monotonically with sigma.
  const double target = kJointSlopeFactor * eps;
  auto slope_of = [](double sigma) {
    const double rho0 = sigma / (1 + sigma);
    return rho0 / ((1 + sigma) * (1 - rho0 * rho0));
  };
  sigma_ = bisect([&](double s) { return slope_of(s) - target; }, 0.0, 1e3, false);
  const double rho0 = sigma_ / (1 + sigma_);
  q0_ = 1 - rho0 * rho0;
  phi0_ = std::asin(rho0);
  slope_ = slope_of(sigma_);
  curv_ = 1.0 / ((1 + sigma_) * (1 + sigma_) * q0_ * q0_);

  // Neck: psi'' = -(c0 + c1 x^k), x = s/a. Matching psi'(a) and psi''(a) fixes
  // c0, c1 given k; the drop psi(0) - psi(a) = epsilon0 then fixes k.
  const double e = curv_;
  const double m1 = slope_ / a;
  const double m2 = eps / (a * a);
  if (!(e > m1 && m1 > 2 * m2)) {
    throw ConstructionError("no concave neck joins the cap for a = " + std::to_string(a) +
                            ", epsilon0 = " + std::to_string(eps));
  }
  auto coeffs = [&](double k) {
    const double c1 = (e - m1) * (k + 1) / k;
    return std::pair{e - c1, c1};
  };
  auto drop = [&](double k) {
    const auto [c0, c1] = coeffs(k);
    return c0 / 2 + c1 / ((k + 1) * (k + 2)) - m2;
  };
  const double k_min = (e - m1) / m1;  // c0 = 0 here
  const double k_max = 1e7;
  if ((drop(k_min * (1 + 1e-12)) < 0) == (drop(k_max) < 0)) {
    throw ConstructionError("no concave neck joins the cap for a = " + std::to_string(a) +
                            ", epsilon0 = " + std::to_string(eps) +
                            " (epsilon0 too large for this a)");
  }
  k_ = bisect(drop, k_min * (1 + 1e-12), k_max, true);
  std::tie(c0_, c1_) = coeffs(k_);
  if (!(c0_ > 0 && c1_ > 0)) {
    throw ConstructionError("neck coefficients are not positive for a = " + std::to_string(a));
  }

  // Strict monotonicity and concavity on a fine grid.
  constexpr int kChecks = 10000;
  for (int i = 0; i <= kChecks; ++i) {
    const double s = (a + 1) * i / kChecks;
    const CapValue v = (*this)(s);
    if (!(v.d2 < 0) || (i > 0 && !(v.d1 < 0))) {
      throw ConstructionError("cap function fails strict concavity or monotonicity at s = " +
                              std::to_string(s));
    }
  }
}

CapValue CapFunction::operator()(double s) const {
  const double a = spec_.a;
  if (!(s >= 0.0 && s <= a + 1)) {
    throw DomainError("cap function argument " + std::to_string(s) + " outside [0, a+1]");
  }
  if (s <= a) {
    const double x = s / a;
    const double xk = std::pow(x, k_);
    const double k1 = k_ + 1;
    const double k2 = k_ + 2;
    const double value =
        s == a ? 1.0 : 1 + spec_.epsilon0 - a * a * (c0_ * x * x / 2 + c1_ * xk * x * x / (k1 * k2));
    return {value, -a * (c0_ * x + c1_ * xk * x / k1), -(c0_ + c1_ * xk)};
  }
  const double sp = 1 + sigma_;
  const double rho = std::min(1.0, (s - a + sigma_) / sp);
  const double q = 1 - rho * rho;
  if (q <= 0) {
    return {0.0, -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  }
  const double sq = std::sqrt(q);
  return {std::sqrt(q / q0_), -rho / (sp * std::sqrt(q0_) * sq),
          -1.0 / (sp * sp * std::sqrt(q0_) * q * sq)};
}

CapFunction::CurvePoint CapFunction::curve(double tau) const {
  const double a = spec_.a;
  if (tau <= 1.0) {
    const double s = a * std::max(0.0, tau);
    return {(*this)(s).value, s};
  }
  if (tau >= 2.0) return {0.0, a + 1};
  const double phi = phi0_ + (tau - 1) * (kHalfPi - phi0_);
  const double rho = std::sin(phi);
  return {std::cos(phi) / std::sqrt(q0_), a - sigma_ + (1 + sigma_) * rho};
}

CapValue cap_function(const CapSpec& spec, double s) { return CapFunction(spec)(s); }

CurvatureSpectrum cap_spectrum_exact(const CapFunction& psi, double s) {
  const double a = psi.spec().a;
  if (s >= a + 1) {
    // Vertex of the cap ellipse: semi-axes (1+sigma) along z, 1/sqrt(q0) along y.
    const double sp = 1 + psi.cap_offset();
    const double rho0 = psi.cap_offset() / sp;
    const double q0 = 1 - rho0 * rho0;
    const double k = sp * q0;
    return {k, k, k};
  }
  const CapValue v = psi(s);
  const double w = std::sqrt(1 + v.d1 * v.d1);
  CurvatureSpectrum spec;
  spec.kappa_profile = -v.d2 / (w * w * w);
  spec.kappa_y = 1.0 / (v.value * w);
  spec.kappa_z = s > 0 ? -v.d1 / (s * w) : -v.d2;
  return spec;
}

SymmetricProfile build_cap_profile(int n, int J, const CapSpec& spec, int m) {
  if (m < 2) throw GeometryError("cap profile needs m >= 2");
  const CapFunction psi(spec);

  auto angle = [&](double tau) {
    const auto c = psi.curve(tau);
    return std::atan2(c.v, c.u);
  };

  // Dense parametric samples, then invert theta(tau).
  const int dense = std::max(20 * m, 4000);
  std::vector<double> taus(2 * dense + 1);
  std::vector<double> thetas(taus.size());
  for (std::size_t k = 0; k < taus.size(); ++k) {
    taus[k] = 2.0 * static_cast<double>(k) / static_cast<double>(taus.size() - 1);
    thetas[k] = angle(taus[k]);
    if (k > 0 && !(thetas[k] > thetas[k - 1])) {
      throw ConstructionError("polar angle is not monotone along the cap curve");
    }
  }
  thetas.back() = kHalfPi;
  const MonotoneCubic tau_of_theta(thetas, taus);

  std::vector<double> r(m + 1);
  r[0] = 1 + spec.epsilon0;
  r[m] = spec.a + 1;
  const double dth = kHalfPi / m;
  for (int i = 1; i < m; ++i) {
    const double th = i * dth;
    const std::size_t k = tau_of_theta.interval(th);
    double lo = taus[k];
    double hi = taus[k + 1];
    // Seed from the interpolant, then polish on the exact curve.
    double t = std::clamp(tau_of_theta(th), lo, hi);
    for (int it = 0; it < 60; ++it) {
      const double g = angle(t) - th;
      if (g == 0) break;
      (g < 0 ? lo : hi) = t;
      const double h = 1e-7 * std::max(hi - lo, 1e-9);
      const double dg = (angle(std::min(t + h, 2.0)) - angle(std::max(t - h, 0.0))) /
                        (std::min(t + h, 2.0) - std::max(t - h, 0.0));
      double next = dg > 0 ? t - g / dg : 0.5 * (lo + hi);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::abs(next - t) <= 1e-16 * std::max(1.0, t)) {
        t = next;
        break;
      }
      t = next;
    }
    const auto c = psi.curve(t);
    r[i] = std::hypot(c.u, c.v);
  }
  return SymmetricProfile(n, J, std::move(r));
}

SymmetricProfile build_ellipsoid_profile(int n, int J, double a, int m) {
  if (!(a > 0) || !std::isfinite(a)) throw DomainError("ellipsoid semi-axis must be positive");
  if (m < 2) throw GeometryError("ellipsoid profile needs m >= 2");
  std::vector<double> r(m + 1);
  for (int i = 0; i <= m; ++i) {
    if (i == m) {
      r[i] = a;
      continue;
    }
    const double th = i * (kHalfPi / m);
    const double c = std::cos(th);
    const double s = std::sin(th);
    r[i] = 1.0 / std::sqrt(c * c + s * s / (a * a));
  }
  return SymmetricProfile(n, J, std::move(r));
}

SymmetricProfile build_sphere_profile(int n, int J, double R, int m) {
  if (!(R > 0) || !std::isfinite(R)) throw DomainError("sphere radius must be positive");
  return SymmetricProfile(n, J, std::vector<double>(m + 1, R));
}

SymmetricProfile random_convex_profile(std::mt19937_64& rng, int n, int J, int m) {
  std::uniform_real_distribution<double> axis_u(1.0, 2.0);
  std::uniform_real_distribution<double> axis_v(1.0, 3.0);
  std::uniform_real_distribution<double> wobble(-0.03, 0.03);
  for (;;) {
    const double A = axis_u(rng);
    const double B = axis_v(rng);
    const double d = wobble(rng);
    std::vector<double> r(m + 1);
    for (int i = 0; i <= m; ++i) {
      const double th = i * (kHalfPi / m);
      const double c = i == m ? 0.0 : std::cos(th);
      const double s = i == m ? 1.0 : std::sin(th);
      r[i] = (1 + d * std::cos(4 * th)) / std::sqrt(c * c / (A * A) + s * s / (B * B));
    }
    SymmetricProfile p(n, J, std::move(r));
    bool convex = true;
    for (const auto& k : curvature_field(p)) convex = convex && k.min(n, J) > 0.0;
    if (convex) return p;
  }
}

InitialValidation validate_initial(const SymmetricProfile& p, const SpeedFunction& f,
                                   double beta_threshold) {
  InitialValidation v;
  v.convexity = convexity_report(p, f, beta_threshold);
  v.c1 = v.convexity.strictly_convex;
  v.c2_ratio_floor = v.convexity.c2_ratio_min;
  v.c3_kappa_floor = v.convexity.c3_kappa_min;
  return v;
}

FamilyValidation validate_initial_family(const std::vector<SymmetricProfile>& family,
                                         const std::vector<double>& parameters,
                                         const SpeedFunction& f, double beta_threshold) {
  if (family.size() != parameters.size()) {
    throw DomainError("family and parameter lists differ in length");
  }
  FamilyValidation out;
  out.parameters = parameters;
  out.all_c1 = true;
  for (const auto& p : family) {
    out.members.push_back(validate_initial(p, f, beta_threshold));
    out.all_c1 = out.all_c1 && out.members.back().c1;
  }
  auto spread = [&](auto get) {
    if (out.members.empty()) return 0.0;
    double lo = get(out.members.front());
    double hi = lo;
    for (const auto& m : out.members) {
      lo = std::min(lo, get(m));
      hi = std::max(hi, get(m));
    }
    return hi > 0 ? (hi - lo) / hi : std::numeric_limits<double>::infinity();
  };
  out.c2_spread = spread([](const InitialValidation& m) { return m.c2_ratio_floor; });
  out.c3_spread = spread([](const InitialValidation& m) { return m.c3_kappa_floor; });
  out.c2_uniform = out.c2_spread <= 0.1;
  out.c3_uniform = out.c3_spread <= 0.1;
  return out;
}

}  // namespace ovalflow
