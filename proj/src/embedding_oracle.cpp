#include "ovalflow/embedding_oracle.hpp"

#include <cmath>
#include <limits>

#include "ovalflow/errors.hpp"

namespace ovalflow {

EmbeddingForms embedding_forms(const Embedding& X, const Eigen::VectorXd& at,
                               const Eigen::VectorXd& steps) {
  const Eigen::Index n = at.size();
  const Eigen::VectorXd x0 = X(at);
  const Eigen::Index N = x0.size();
  if (N != n + 1) throw ArityError("embedding must map R^n into R^{n+1}");

  // Fourth-order central stencils; mixed partials are the tensor product of
  // the first-derivative stencil. Differences are taken against x0 so that
  // components independent of a coordinate cancel exactly.
  static constexpr int kOff[4] = {-2, -1, 1, 2};
  static constexpr double kD1[4] = {1.0 / 12, -8.0 / 12, 8.0 / 12, -1.0 / 12};
  static constexpr double kD2[4] = {-1.0 / 12, 16.0 / 12, 16.0 / 12, -1.0 / 12};
  Eigen::MatrixXd jac(N, n);
  std::vector<Eigen::VectorXd> second(n * n);
  Eigen::VectorXd p = at;
  for (Eigen::Index a = 0; a < n; ++a) {
    const double ha = steps(a);
    Eigen::VectorXd d1 = Eigen::VectorXd::Zero(N);
    Eigen::VectorXd d2 = Eigen::VectorXd::Zero(N);
    for (int k = 0; k < 4; ++k) {
      p(a) = at(a) + kOff[k] * ha;
      const Eigen::VectorXd xk = X(p) - x0;
      d1 += kD1[k] * xk;
      d2 += kD2[k] * xk;
    }
    p(a) = at(a);
    jac.col(a) = d1 / ha;
    second[a * n + a] = d2 / (ha * ha);
    for (Eigen::Index b = a + 1; b < n; ++b) {
      const double hb = steps(b);
      Eigen::VectorXd mixed = Eigen::VectorXd::Zero(N);
      for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
          p(a) = at(a) + kOff[i] * ha;
          p(b) = at(b) + kOff[j] * hb;
          mixed += (kD1[i] * kD1[j]) * (X(p) - x0);
        }
      }
      p(a) = at(a);
      p(b) = at(b);
      mixed /= ha * hb;
      second[a * n + b] = mixed;
      second[b * n + a] = mixed;
    }
  }

  EmbeddingForms out;
  out.g = jac.transpose() * jac;
  {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(out.g, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    if (!(lo > 1e-12 * hi)) throw ConditioningError("first fundamental form is near-singular");
  }
  // Normal: the left singular vector orthogonal to the tangent space.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac, Eigen::ComputeFullU);
  Eigen::VectorXd normal = svd.matrixU().col(N - 1);
  if (normal.dot(x0) < 0.0) normal = -normal;
  out.normal = normal;

  out.h.resize(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) out.h(a, b) = -normal.dot(second[a * n + b]);
  }
  out.h = 0.5 * (out.h + out.h.transpose());

  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(out.h, out.g);
  out.eigenvalues = ges.eigenvalues();
  out.eigenvectors = ges.eigenvectors();
  return out;
}

namespace {

// Unit vector (w, sqrt(1 - |w|^2)) on a sphere.
void sphere_point(const Eigen::VectorXd& w, Eigen::Ref<Eigen::VectorXd> out) {
  const double s2 = w.squaredNorm();
  out.head(w.size()) = w;
  out(w.size()) = std::sqrt(1.0 - s2);
}

// Solves rho(phi) sin(phi) = target for the quadratic jet rho = r0 + c phi^2 / 2.
double solve_angle(double r0, double c, double target) {
  double phi = target / r0;
  for (int it = 0; it < 60; ++it) {
    const double rho = r0 + 0.5 * c * phi * phi;
    const double g = rho * std::sin(phi) - target;
    const double dg = c * phi * std::sin(phi) + rho * std::cos(phi);
    const double step = g / dg;
    phi -= step;
    if (std::abs(step) < 1e-17 * (1.0 + std::abs(phi))) break;
  }
  return phi;
}

// Mean principal curvature of the coordinate block [begin, end). The forms
// are block diagonal by symmetry, so the off-block entries are rounding noise;
// solving the block alone keeps near-degenerate eigenpairs of different
// blocks from mixing.
double block_curvature(const EmbeddingForms& forms, Eigen::Index begin, Eigen::Index end) {
  if (end <= begin) return std::numeric_limits<double>::quiet_NaN();
  const Eigen::Index len = end - begin;
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> sub(
      forms.h.block(begin, begin, len, len), forms.g.block(begin, begin, len, len),
      Eigen::EigenvaluesOnly);
  return sub.eigenvalues().mean();
}

}  // namespace

CurvatureSpectrum embedding_oracle_curvatures(const SymmetricProfile& p, int i) {
  if (i < 0 || i > p.m()) throw DomainError("grid index out of range");
  const int n = p.n();
  const int J = p.J();
  const auto jet = radial_jet(p, i);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  constexpr double kAngleStep = 1e-2;

  CurvatureSpectrum out;
  if (!jet.at_plane && !jet.at_axis) {
    // Coordinates: theta offset, then J coordinates on S^J, then n-J-1 on S^{n-J-1}.
    const double theta0 = jet.theta;
    Embedding X = [&](const Eigen::VectorXd& q) {
      const double t = q(0);
      const double rho = jet.r + jet.r_t * t + 0.5 * jet.r_tt * t * t;
      const double u = rho * std::cos(theta0 + t);
      const double v = rho * std::sin(theta0 + t);
      Eigen::VectorXd x(n + 1);
      sphere_point(q.segment(1, J), x.segment(0, J + 1));
      x.segment(0, J + 1) *= u;
      sphere_point(q.segment(J + 1, n - J - 1), x.segment(J + 1, n - J));
      x.segment(J + 1, n - J) *= v;
      return x;
    };
    const Eigen::VectorXd at = Eigen::VectorXd::Zero(n);
    // The normal's v-component is small near the plane and inherits the
    // Jacobian's truncation error, so theta gets a finer step.
    Eigen::VectorXd steps = Eigen::VectorXd::Constant(n, kAngleStep);
    steps(0) = 0.1 * kAngleStep;
    const auto forms = embedding_forms(X, at, steps);
    out.kappa_profile = block_curvature(forms, 0, 1);
    out.kappa_y = block_curvature(forms, 1, 1 + J);
    out.kappa_z = block_curvature(forms, 1 + J, n);
  } else if (jet.at_plane) {
    // Coordinates: J on S^J, then z in R^{n-J} Cartesian; |y| = U(|z|).
    Embedding X = [&](const Eigen::VectorXd& q) {
      const Eigen::VectorXd z = q.segment(J, n - J);
      const double s = z.norm();
      const double phi = s == 0.0 ? 0.0 : solve_angle(jet.r, jet.r_tt, s);
      const double u = (jet.r + 0.5 * jet.r_tt * phi * phi) * std::cos(phi);
      Eigen::VectorXd x(n + 1);
      sphere_point(q.segment(0, J), x.segment(0, J + 1));
      x.segment(0, J + 1) *= u;
      x.segment(J + 1, n - J) = z;
      return x;
    };
    Eigen::VectorXd steps(n);
    steps.head(J).setConstant(kAngleStep);
    steps.tail(n - J).setConstant(kAngleStep * jet.r);
    const auto forms = embedding_forms(X, Eigen::VectorXd::Zero(n), steps);
    out.kappa_y = block_curvature(forms, 0, J);
    out.kappa_profile = block_curvature(forms, J, n);
    out.kappa_z = p.mult_z() > 0 ? out.kappa_profile : nan;
  } else {
    // Coordinates: y in R^{J+1} Cartesian, then n-J-1 on S^{n-J-1}; |z| = V(|y|).
    Embedding X = [&](const Eigen::VectorXd& q) {
      const Eigen::VectorXd y = q.segment(0, J + 1);
      const double s = y.norm();
      const double phi = s == 0.0 ? 0.0 : solve_angle(jet.r, jet.r_tt, s);
      const double v = (jet.r + 0.5 * jet.r_tt * phi * phi) * std::cos(phi);
      Eigen::VectorXd x(n + 1);
      x.segment(0, J + 1) = y;
      sphere_point(q.segment(J + 1, n - J - 1), x.segment(J + 1, n - J));
      x.segment(J + 1, n - J) *= v;
      return x;
    };
    Eigen::VectorXd steps(n);
    steps.head(J + 1).setConstant(kAngleStep * jet.r);
    steps.tail(n - J - 1).setConstant(kAngleStep);
    const auto forms = embedding_forms(X, Eigen::VectorXd::Zero(n), steps);
    out.kappa_profile = block_curvature(forms, 0, J + 1);
    out.kappa_y = out.kappa_profile;
    out.kappa_z = block_curvature(forms, J + 1, n);
  }
  if (p.mult_z() == 0) out.kappa_z = nan;
  return out;
}

}  // namespace ovalflow
