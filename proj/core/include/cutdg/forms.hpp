#pragma once

#include <functional>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "cutdg/levelset.hpp"
#include "cutdg/mesh.hpp"
#include "cutdg/quadrature.hpp"
#include "cutdg/space.hpp"
#include "cutdg/types.hpp"

namespace cutdg {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Coupling coefficients and penalty weights of the stabilized method.
struct StabilizationParams {
  double cBulk = 1.0;
  double cSurf = 1.0;
  double gammaBulk = 50.0;
  double gammaSurf = 50.0;
  double muBulk = 50.0;
  double muSurf = 50.0;
  double tauBulk = 0.01;
  double tauSurf = 0.01;

  /// Throws ConfigurationError unless c > 0 and all weights >= 0.
  void validate() const;

  /// mu_surf = tau_bulk = tau_surf = 0, the unstabilized comparison run.
  StabilizationParams ghostAblated() const;
  StabilizationParams withoutBulkGhost() const;
  StabilizationParams withoutSurfaceGhost() const;
};

/// Everything the assembly needs for one mesh / surface pair.
struct Discretization {
  BackgroundMesh mesh;
  LevelSet levelset;
  DiscreteLevelSet dls;
  CutTopology topo;
  CombinedDofMap dofs;

  double h() const { return mesh.h(); }
};

Discretization discretize(BackgroundMesh mesh, LevelSet levelset);

/// Right-hand side data on a tubular neighborhood of the surface.
struct LoadData {
  ScalarField fBulk;
  /// Surface forcing already extended off the surface (e.g. f∘p).
  ScalarField fSurf;
  /// Optional: mismatch g(x, n_h) between the bulk normal flux and the
  /// coupling condition on the discrete surface, added as Neumann data.
  std::function<double(const Vec2&, const Vec2&)> bulkFluxMismatch;
  /// Optional: ambient gradient of the surface solution, used to add the
  /// co-normal flux jump at kinks of the discrete surface as point sources.
  VectorField surfaceGradient;
  int degree = 4;
};

/// Each assembler returns an N x N matrix (N = dofs.size()) with entries
/// confined to its block.
SparseMatrix assemble_bulk_form(const Discretization& d, const StabilizationParams& p);
SparseMatrix assemble_surface_form(const Discretization& d, const StabilizationParams& p);
SparseMatrix assemble_coupling_form(const Discretization& d, const StabilizationParams& p);
SparseMatrix assemble_ghost_bulk(const Discretization& d, const StabilizationParams& p);
SparseMatrix assemble_ghost_surface(const Discretization& d, const StabilizationParams& p);

Eigen::VectorXd assemble_rhs(const Discretization& d, const LoadData& load, const StabilizationParams& p);

struct AssembledSystem {
  SparseMatrix matrix;
  Eigen::VectorXd rhs;
  CombinedDofMap dofs;
  StabilizationParams params;
  double h = 0.0;
};

/// A_h = c_bulk (a_bulk + j_bulk) + c_surf (a_surf + j_surf) + a_coupling.
SparseMatrix assemble_matrix(const Discretization& d, const StabilizationParams& p);
AssembledSystem assemble_system(const Discretization& d, const LoadData& load, const StabilizationParams& p);

enum class NormVariant { Bulk, Surface, Total };

/// Gram matrix of the discrete energy norm, including ghost penalties at the
/// weights in `p` and, for Total, the coupling seminorm.
SparseMatrix energy_gram(const Discretization& d, const StabilizationParams& p, NormVariant variant);

/// Gram of ||grad v||^2 on the bulk block, over full active elements or over
/// their parts inside the discrete domain.
SparseMatrix bulk_gradient_gram(const Discretization& d, bool fullElements);

/// Gram of ||grad_Gamma v||^2 over the discrete surface.
SparseMatrix surface_gradient_gram(const Discretization& d);

/// Gram of ||v||^2 over the full elements of the surface-active mesh.
SparseMatrix surface_band_mass(const Discretization& d);

/// Row vector m with m·V equal to the mean of v over the discrete surface.
Eigen::VectorXd surface_mean_functional(const Discretization& d);

/// Maximum |A_ij - A_ji|.
double symmetry_defect(const SparseMatrix& a);

/// `i j value` per stored entry (0-based).
void write_coordinate(std::ostream& out, const SparseMatrix& a);
void write_coordinate(std::ostream& out, const Eigen::VectorXd& v);

}  // namespace cutdg
