#pragma once

#include <functional>
#include <string>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "cutdg/forms.hpp"

namespace cutdg {

enum class SolveMethod { Auto, ConjugateGradient, Direct };

struct SolveOptions {
  double relTol = 1e-10;
  /// 0 means 20 N.
  long maxIterations = 0;
  SolveMethod method = SolveMethod::Auto;
  /// Auto falls back to a sparse LDL^T factorization when CG fails and N is
  /// at most this.
  int directFallbackLimit = 20000;
};

struct SolveResult {
  Eigen::VectorXd x;
  long iterations = 0;
  double relResidual = 0.0;
  SolveMethod method = SolveMethod::ConjugateGradient;
};

/// Jacobi-preconditioned conjugate gradients. Throws SolverError on
/// breakdown (non-positive curvature) or when the iteration limit is hit.
SolveResult conjugate_gradient(const SparseMatrix& a, const Eigen::VectorXd& b, double relTol, long maxIterations);

SolveResult solve(const SparseMatrix& a, const Eigen::VectorXd& b, const SolveOptions& options = {});
SolveResult solve(const AssembledSystem& system, const SolveOptions& options = {});

/// D A D with D = 1 on bulk DOFs and h^exponent on surface DOFs. With the
/// default 1/4 the surface block is scaled by h^{1/2} and the coupling block
/// by h^{1/4}.
SparseMatrix rescaled_matrix(const AssembledSystem& system, double surfaceExponent = 0.25);

struct ConditionEstimate {
  double kappa = 0.0;
  double lambdaMinNonzero = 0.0;  ///< smallest |lambda| above the zero threshold
  double lambdaMax = 0.0;         ///< largest |lambda|
  bool dense = true;
};

struct ConditionOptions {
  /// |lambda| <= zeroThreshold * max|lambda| counts as zero.
  double zeroThreshold = 1e-12;
  int denseLimit = 6000;
  int lanczosSteps = 300;
};

/// Ratio of the largest to the smallest nonzero eigenvalue modulus of a
/// symmetric matrix. Throws SolverError if every eigenvalue is zero.
ConditionEstimate condition_number(const SparseMatrix& a, const ConditionOptions& options = {});

/// Eigenvalues of a dense symmetric matrix, ascending.
Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& a);

using LinearOperator = std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>;

/// Extreme Ritz values of a symmetric operator from Lanczos with full
/// reorthogonalization, started from a fixed pseudo-random vector.
struct LanczosResult {
  double min = 0.0;
  double max = 0.0;
  int steps = 0;
};
LanczosResult lanczos_extremes(const LinearOperator& op, int n, int maxSteps, double tol = 1e-10);

/// Extreme eigenvalues of the pencil (A, B) on the subspace where B is
/// numerically nonzero, optionally intersected with the orthogonal
/// complement of `constraint` (in the Euclidean inner product). With
/// `definite` the restricted B is taken to be SPD and a Cholesky-based
/// solver is used instead; SolverError if it is not.
struct PencilExtremes {
  double min = 0.0;
  double max = 0.0;
  int rank = 0;
};
PencilExtremes generalized_extremes(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                    const Eigen::VectorXd* constraint = nullptr, double rankTol = 1e-12,
                                    bool definite = false);

}  // namespace cutdg
