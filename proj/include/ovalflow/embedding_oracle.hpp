#pragma once

#include <functional>

#include <Eigen/Dense>

#include "ovalflow/profile.hpp"

namespace ovalflow {

/// Local parametrization of a hypersurface: R^n -> R^{n+1}.
using Embedding = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct EmbeddingForms {
  Eigen::MatrixXd g;             ///< first fundamental form
  Eigen::MatrixXd h;             ///< second fundamental form, outward normal
  Eigen::VectorXd normal;        ///< unit normal with normal . X > 0
  Eigen::VectorXd eigenvalues;   ///< principal curvatures, ascending
  Eigen::MatrixXd eigenvectors;  ///< g-orthonormal columns
};

/// Fourth-order finite-difference fundamental forms of X at `at` with per-coordinate
/// steps, followed by the generalized eigenproblem h v = lambda g v. The
/// normal is oriented away from the origin. Throws ConditioningError when g is
/// numerically singular.
EmbeddingForms embedding_forms(const Embedding& X, const Eigen::VectorXd& at,
                               const Eigen::VectorXd& steps);

/// Principal curvatures of the profile at node i computed by embedding the
/// local second-order jet of r in R^{n+1} and differentiating numerically.
/// Channels with zero multiplicity are reported as NaN. Test oracle only.
CurvatureSpectrum embedding_oracle_curvatures(const SymmetricProfile& p, int i);

}  // namespace ovalflow
