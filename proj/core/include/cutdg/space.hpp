#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include <Eigen/Core>

#include "cutdg/mesh.hpp"
#include "cutdg/types.hpp"

namespace cutdg {

/// Values and (constant) gradients of the three barycentric hat functions.
struct P1Basis {
  std::array<double, 3> values{};
  std::array<Vec2, 3> gradients;
};

P1Basis evaluate_basis(const BackgroundMesh& mesh, int element, const Vec2& point);

/// Gradients only; they do not depend on the point.
std::array<Vec2, 3> basis_gradients(const BackgroundMesh& mesh, int element);

/// Discontinuous P1 on a set of background elements, three DOFs per element.
class BrokenSpace {
 public:
  BrokenSpace() = default;
  BrokenSpace(std::vector<int> elements, int numBackgroundElements, int offset);

  const std::vector<int>& elements() const { return elements_; }
  int offset() const { return offset_; }
  int dimension() const { return 3 * static_cast<int>(elements_.size()); }
  bool contains(int element) const { return localIndex_[element] >= 0; }

  /// Global DOF indices of an active element's three local functions.
  std::array<int, 3> dofs(int element) const {
    const int base = offset_ + 3 * localIndex_[element];
    return {base, base + 1, base + 2};
  }

 private:
  std::vector<int> elements_;
  std::vector<int> localIndex_;
  int offset_ = 0;
};

/// V_h = bulk × surface with the surface block following the bulk block.
struct CombinedDofMap {
  BrokenSpace bulk;
  BrokenSpace surface;

  int size() const { return bulk.dimension() + surface.dimension(); }
  int bulkSize() const { return bulk.dimension(); }
  int surfaceSize() const { return surface.dimension(); }
};

CombinedDofMap make_dof_map(const std::vector<int>& bulkElements, const std::vector<int>& surfaceElements,
                            int numBackgroundElements);

/// Per-element vertex interpolation of f, written into the space's block of
/// a vector of length `totalSize` (defaults to the space's own end).
Eigen::VectorXd interpolate_nodal(const BackgroundMesh& mesh, const BrokenSpace& space, const ScalarField& f,
                                  int totalSize = -1);

/// Evaluates a coefficient vector of `space` on `element` at `point`.
double evaluate(const BackgroundMesh& mesh, const BrokenSpace& space, const Eigen::VectorXd& coeffs, int element,
                const Vec2& point);

Vec2 evaluate_gradient(const BackgroundMesh& mesh, const BrokenSpace& space, const Eigen::VectorXd& coeffs,
                       int element);

/// One value per line.
void write_coefficients(std::ostream& out, const Eigen::VectorXd& coeffs);
Eigen::VectorXd read_coefficients(std::istream& in);

}  // namespace cutdg
