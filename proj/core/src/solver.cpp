#include "cutdg/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/Householder>
#include <Eigen/SparseCholesky>
#include <fmt/format.h>

namespace cutdg {

SolveResult conjugate_gradient(const SparseMatrix& a, const Eigen::VectorXd& b, double relTol, long maxIterations) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n || b.size() != n) throw ConfigurationError("dimension mismatch in conjugate_gradient");
  if (maxIterations <= 0) maxIterations = 20L * n;

  Eigen::VectorXd invDiag(n);
  const Eigen::VectorXd diag = a.diagonal();
  for (Eigen::Index i = 0; i < n; ++i) invDiag[i] = diag[i] > 0.0 ? 1.0 / diag[i] : 1.0;

  SolveResult result;
  result.method = SolveMethod::ConjugateGradient;
  result.x = Eigen::VectorXd::Zero(n);
  const double bnorm = b.norm();
  if (bnorm == 0.0) return result;

  Eigen::VectorXd r = b;
  Eigen::VectorXd z = invDiag.cwiseProduct(r);
  Eigen::VectorXd p = z;
  Eigen::VectorXd ap(n);
  double rz = r.dot(z);
  double rnorm = bnorm;
  long it = 0;
  while (rnorm > relTol * bnorm) {
    if (it >= maxIterations) {
      throw SolverError(fmt::format("CG did not converge in {} iterations (relative residual {:.3e})", it,
                                    rnorm / bnorm));
    }
    ap.noalias() = a * p;
    const double curvature = p.dot(ap);
    if (!(curvature > 0.0)) {
      throw SolverError(fmt::format("CG breakdown at iteration {}: non-positive curvature {:.3e}", it, curvature));
    }
    const double alpha = rz / curvature;
    result.x += alpha * p;
    r -= alpha * ap;
    z = invDiag.cwiseProduct(r);
    const double rzNew = r.dot(z);
    p = z + (rzNew / rz) * p;
    rz = rzNew;
    rnorm = r.norm();
    ++it;
  }
  result.iterations = it;
  result.relResidual = rnorm / bnorm;
  return result;
}

namespace {

SolveResult direct_solve(const SparseMatrix& a, const Eigen::VectorXd& b, double relTol) {
  Eigen::SimplicialLDLT<SparseMatrix> ldlt(a);
  if (ldlt.info() != Eigen::Success) throw SolverError("sparse LDL^T factorization failed");
  SolveResult result;
  result.method = SolveMethod::Direct;
  result.x = ldlt.solve(b);
  const double bnorm = b.norm();
  if (bnorm == 0.0) return result;
  // A couple of refinement sweeps recover accuracy lost to pivot growth.
  for (int sweep = 0; sweep < 3; ++sweep) {
    const Eigen::VectorXd r = b - a * result.x;
    result.relResidual = r.norm() / bnorm;
    if (result.relResidual <= relTol) break;
    result.x += ldlt.solve(r);
  }
  result.relResidual = (b - a * result.x).norm() / bnorm;
  if (!result.x.allFinite() || !(result.relResidual <= std::max(relTol, 1e-8))) {
    throw SolverError(fmt::format("direct solve inaccurate (relative residual {:.3e})", result.relResidual));
  }
  return result;
}

}  // namespace

SolveResult solve(const SparseMatrix& a, const Eigen::VectorXd& b, const SolveOptions& options) {
  switch (options.method) {
    case SolveMethod::ConjugateGradient:
      return conjugate_gradient(a, b, options.relTol, options.maxIterations);
    case SolveMethod::Direct:
      return direct_solve(a, b, options.relTol);
    case SolveMethod::Auto:
      break;
  }
  try {
    return conjugate_gradient(a, b, options.relTol, options.maxIterations);
  } catch (const SolverError& cgFailure) {
    if (a.rows() > options.directFallbackLimit) throw;
    try {
      return direct_solve(a, b, options.relTol);
    } catch (const SolverError& directFailure) {
      throw SolverError(fmt::format("{}; fallback: {}", cgFailure.what(), directFailure.what()));
    }
  }
}

SolveResult solve(const AssembledSystem& system, const SolveOptions& options) {
  return solve(system.matrix, system.rhs, options);
}

SparseMatrix rescaled_matrix(const AssembledSystem& system, double surfaceExponent) {
  const int n = system.dofs.size();
  Eigen::VectorXd scale = Eigen::VectorXd::Ones(n);
  const double s = std::pow(system.h, surfaceExponent);
  for (int i = system.dofs.bulkSize(); i < n; ++i) scale[i] = s;
  SparseMatrix out = scale.asDiagonal() * system.matrix * scale.asDiagonal();
  out.makeCompressed();
  return out;
}

Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw SolverError("dense symmetric eigensolver failed");
  return es.eigenvalues();
}

LanczosResult lanczos_extremes(const LinearOperator& op, int n, int maxSteps, double tol) {
  maxSteps = std::min(maxSteps, n);
  std::mt19937 rng(20240611u);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Eigen::MatrixXd q(n, maxSteps + 1);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = uni(rng);
  q.col(0) = v.normalized();

  std::vector<double> alpha, beta;
  LanczosResult result;
  double prevMin = 0.0, prevMax = 0.0;
  Eigen::VectorXd w(n);
  for (int k = 0; k < maxSteps; ++k) {
    op(q.col(k), w);
    const double a = q.col(k).dot(w);
    alpha.push_back(a);
    // Full reorthogonalization, twice for stability.
    for (int pass = 0; pass < 2; ++pass) {
      w -= q.leftCols(k + 1) * (q.leftCols(k + 1).transpose() * w);
    }
    const double bnext = w.norm();

    const bool check = (k + 1) % 5 == 0 || k + 1 == maxSteps || bnext < 1e-14;
    if (check) {
      const int m = k + 1;
      Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
      for (int i = 0; i < m; ++i) {
        t(i, i) = alpha[i];
        if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[i];
      }
      const Eigen::VectorXd theta = symmetric_eigenvalues(t);
      result.min = theta[0];
      result.max = theta[m - 1];
      result.steps = m;
      const double scale = std::max(std::abs(result.min), std::abs(result.max));
      const bool converged = m > 5 && std::abs(result.min - prevMin) <= tol * scale &&
                             std::abs(result.max - prevMax) <= tol * scale;
      prevMin = result.min;
      prevMax = result.max;
      if (converged || bnext < 1e-14) break;
    }
    beta.push_back(bnext);
    q.col(k + 1) = w / bnext;
  }
  return result;
}

ConditionEstimate condition_number(const SparseMatrix& a, const ConditionOptions& options) {
  ConditionEstimate est;
  const int n = static_cast<int>(a.rows());
  if (n <= options.denseLimit) {
    const Eigen::VectorXd lambda = symmetric_eigenvalues(Eigen::MatrixXd(a));
    const double top = lambda.cwiseAbs().maxCoeff();
    double bottom = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
      const double m = std::abs(lambda[i]);
      if (m > options.zeroThreshold * top) bottom = std::min(bottom, m);
    }
    if (!(top > 0.0) || !std::isfinite(bottom)) throw SolverError("degenerate matrix: all eigenvalues are zero");
    est.lambdaMax = top;
    est.lambdaMinNonzero = bottom;
    est.kappa = top / bottom;
    est.dense = true;
    return est;
  }

  const LanczosResult upper = lanczos_extremes(
      [&a](const Eigen::VectorXd& x, Eigen::VectorXd& y) { y.noalias() = a * x; }, n, options.lanczosSteps);
  est.lambdaMax = std::max(std::abs(upper.min), std::abs(upper.max));

  Eigen::SimplicialLDLT<SparseMatrix> ldlt(a);
  if (ldlt.info() != Eigen::Success) throw SolverError("degenerate matrix: factorization for inverse iteration failed");
  const LanczosResult inverse = lanczos_extremes(
      [&ldlt](const Eigen::VectorXd& x, Eigen::VectorXd& y) { y = ldlt.solve(x); }, n, options.lanczosSteps);
  const double invTop = std::max(std::abs(inverse.min), std::abs(inverse.max));
  if (!(invTop > 0.0) || !std::isfinite(invTop)) throw SolverError("degenerate matrix: inverse iteration failed");
  est.lambdaMinNonzero = 1.0 / invTop;
  if (est.lambdaMinNonzero <= options.zeroThreshold * est.lambdaMax) {
    throw SolverError("degenerate matrix: smallest eigenvalue below the zero threshold");
  }
  est.kappa = est.lambdaMax / est.lambdaMinNonzero;
  est.dense = false;
  return est;
}

PencilExtremes generalized_extremes(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                    const Eigen::VectorXd* constraint, double rankTol, bool definite) {
  const Eigen::Index n = a.rows();
  Eigen::MatrixXd ar = a, br = b;
  if (constraint != nullptr) {
    // Reflector mapping the constraint to e_0; drop the first row and column.
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(*constraint);
    const auto q = qr.householderQ();
    Eigen::MatrixXd t = q.transpose() * a;
    t.applyOnTheRight(q);
    ar = t.bottomRightCorner(n - 1, n - 1);
    t = q.transpose() * b;
    t.applyOnTheRight(q);
    br = t.bottomRightCorner(n - 1, n - 1);
  }

  PencilExtremes out;
  if (definite) {
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(0.5 * (ar + ar.transpose()),
                                                                 0.5 * (br + br.transpose()), Eigen::EigenvaluesOnly);
    if (ges.info() != Eigen::Success) throw SolverError("reference Gram matrix is not positive definite");
    out.min = ges.eigenvalues()[0];
    out.max = ges.eigenvalues()[ges.eigenvalues().size() - 1];
    out.rank = static_cast<int>(br.rows());
    return out;
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eb(br);
  if (eb.info() != Eigen::Success) throw SolverError("eigensolver failed on the reference Gram matrix");
  const Eigen::VectorXd& mu = eb.eigenvalues();
  const double top = mu.cwiseAbs().maxCoeff();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    if (mu[i] > rankTol * top) keep.push_back(i);
  }
  if (keep.empty()) throw SolverError("reference Gram matrix is zero");
  Eigen::MatrixXd w(ar.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    w.col(static_cast<Eigen::Index>(k)) = eb.eigenvectors().col(keep[k]) / std::sqrt(mu[keep[k]]);
  }
  const Eigen::MatrixXd c = w.transpose() * ar * w;
  const Eigen::VectorXd theta = symmetric_eigenvalues(0.5 * (c + c.transpose()));
  out.min = theta[0];
  out.max = theta[theta.size() - 1];
  out.rank = static_cast<int>(keep.size());
  return out;
}

}  // namespace cutdg
