#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "cutdg/forms.hpp"
#include "cutdg/levelset.hpp"
#include "cutdg/types.hpp"

namespace cutdg {

/// Exact bulk/surface pair with matching forcing. Surface fields are
/// defined on a tubular neighborhood of the surface (for the circle: by
/// composition with the closest-point map).
struct ManufacturedProblem {
  ScalarField uBulk;
  VectorField gradUBulk;
  ScalarField uSurf;
  /// Ambient gradient of the extended surface solution.
  VectorField gradUSurf;
  ScalarField fBulk;
  ScalarField fSurf;
  LevelSet geometry;
  double cBulk = 1.0;
  double cSurf = 1.0;
  /// Add the discrete-surface flux mismatch and kink sources to the load
  /// (only meaningful for globally affine data).
  bool discreteCorrections = false;

  LoadData load() const;
};

/// Unit-circle problem with u_bulk = c_surf exp(-x(x-1)y(y-1)). The surface
/// solution is derived from the coupling condition,
/// u_surf = (d_n u_bulk + c_bulk u_bulk) / c_surf, and the forcings from the
/// strong equations.
ManufacturedProblem build_circle_problem(double cBulk = 1.0, double cSurf = 1.0, const Vec2& center = Vec2::Zero(),
                                         double radius = 1.0);

/// u_bulk = a0 + g·x, u_surf = b0 + k·x on any geometry, with a load that is
/// consistent on the discrete surface, so P1 reproduces it exactly.
ManufacturedProblem build_affine_problem(const LevelSet& geometry, double cBulk, double cSurf, double a0,
                                         const Vec2& g, double b0, const Vec2& k);

struct ErrorReport {
  double h1Bulk = 0.0;
  double l2Bulk = 0.0;
  double h1Surf = 0.0;
  double l2Surf = 0.0;
};

/// Errors of `solution` on Omega_h and Gamma_h. H1 norms include the L2 part;
/// the surface H1 uses the tangential gradient on the discrete surface.
ErrorReport compute_errors(const Discretization& d, const ManufacturedProblem& problem,
                           const Eigen::VectorXd& solution, int degree = 4);

/// EOC(k) = log(E_{k-1} / E_k) / log 2, one entry per consecutive pair.
std::vector<double> eoc(std::span<const double> errors);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace cutdg
