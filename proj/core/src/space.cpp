#include "cutdg/space.hpp"

#include <istream>
#include <ostream>
#include <string>

#include <fmt/format.h>

namespace cutdg {

std::array<Vec2, 3> basis_gradients(const BackgroundMesh& mesh, int element) {
  const auto x = mesh.corners(element);
  const double twiceArea = 2.0 * mesh.signedArea(element);
  std::array<Vec2, 3> g;
  for (int i = 0; i < 3; ++i) {
    const Vec2 e = x[(i + 2) % 3] - x[(i + 1) % 3];
    g[i] = Vec2(-e.y(), e.x()) / twiceArea;
  }
  return g;
}

P1Basis evaluate_basis(const BackgroundMesh& mesh, int element, const Vec2& point) {
  P1Basis b;
  b.gradients = basis_gradients(mesh, element);
  const auto x = mesh.corners(element);
  for (int i = 0; i < 3; ++i) {
    // lambda_i is affine, equal to 1 at x_i.
    b.values[i] = 1.0 + b.gradients[i].dot(point - x[i]);
  }
  return b;
}

BrokenSpace::BrokenSpace(std::vector<int> elements, int numBackgroundElements, int offset)
    : elements_(std::move(elements)), localIndex_(numBackgroundElements, -1), offset_(offset) {
  for (int k = 0; k < static_cast<int>(elements_.size()); ++k) {
    const int e = elements_[k];
    if (e < 0 || e >= numBackgroundElements) throw ConfigurationError(fmt::format("element {} out of range", e));
    if (localIndex_[e] >= 0) throw ConfigurationError(fmt::format("element {} listed twice", e));
    localIndex_[e] = k;
  }
}

CombinedDofMap make_dof_map(const std::vector<int>& bulkElements, const std::vector<int>& surfaceElements,
                            int numBackgroundElements) {
  CombinedDofMap map;
  map.bulk = BrokenSpace(bulkElements, numBackgroundElements, 0);
  map.surface = BrokenSpace(surfaceElements, numBackgroundElements, map.bulk.dimension());
  return map;
}

Eigen::VectorXd interpolate_nodal(const BackgroundMesh& mesh, const BrokenSpace& space, const ScalarField& f,
                                  int totalSize) {
  const int n = totalSize < 0 ? space.offset() + space.dimension() : totalSize;
  Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(n);
  for (int e : space.elements()) {
    const auto dofs = space.dofs(e);
    const auto& t = mesh.elements()[e];
    for (int i = 0; i < 3; ++i) coeffs[dofs[i]] = f(mesh.vertices()[t[i]]);
  }
  return coeffs;
}

double evaluate(const BackgroundMesh& mesh, const BrokenSpace& space, const Eigen::VectorXd& coeffs, int element,
                const Vec2& point) {
  const auto b = evaluate_basis(mesh, element, point);
  const auto dofs = space.dofs(element);
  return b.values[0] * coeffs[dofs[0]] + b.values[1] * coeffs[dofs[1]] + b.values[2] * coeffs[dofs[2]];
}

Vec2 evaluate_gradient(const BackgroundMesh& mesh, const BrokenSpace& space, const Eigen::VectorXd& coeffs,
                       int element) {
  const auto g = basis_gradients(mesh, element);
  const auto dofs = space.dofs(element);
  return coeffs[dofs[0]] * g[0] + coeffs[dofs[1]] * g[1] + coeffs[dofs[2]] * g[2];
}

void write_coefficients(std::ostream& out, const Eigen::VectorXd& coeffs) {
  for (Eigen::Index i = 0; i < coeffs.size(); ++i) out << fmt::format("{:.17g}\n", coeffs[i]);
}

Eigen::VectorXd read_coefficients(std::istream& in) {
  std::vector<double> values;
  double v = 0.0;
  while (in >> v) values.push_back(v);
  return Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

}  // namespace cutdg
