#include "cutdg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>

#include <fmt/format.h>

namespace cutdg {

BackgroundMesh::BackgroundMesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> elements,
                               Box box)
    : vertices_(std::move(vertices)), elements_(std::move(elements)), box_(box) {
  for (int e = 0; e < numElements(); ++e) {
    if (!(signedArea(e) > 0.0)) {
      throw StructuralError(fmt::format("element {} has non-positive signed area", e));
    }
  }
  buildConnectivity();
}

std::array<Vec2, 3> BackgroundMesh::corners(int element) const {
  const auto& t = elements_[element];
  return {vertices_[t[0]], vertices_[t[1]], vertices_[t[2]]};
}

double BackgroundMesh::signedArea(int element) const {
  const auto [a, b, c] = corners(element);
  const Vec2 u = b - a;
  const Vec2 v = c - a;
  return 0.5 * (u.x() * v.y() - u.y() * v.x());
}

void BackgroundMesh::buildConnectivity() {
  std::map<std::array<int, 2>, int> edgeIndex;
  elementEdges_.assign(elements_.size(), {-1, -1, -1});
  edges_.clear();
  edgeElements_.clear();

  for (int e = 0; e < numElements(); ++e) {
    const auto& t = elements_[e];
    for (int i = 0; i < 3; ++i) {
      std::array<int, 2> key{t[(i + 1) % 3], t[(i + 2) % 3]};
      if (key[0] > key[1]) std::swap(key[0], key[1]);
      auto [it, inserted] = edgeIndex.try_emplace(key, static_cast<int>(edges_.size()));
      if (inserted) {
        edges_.push_back(key);
        edgeElements_.push_back({e, -1});
      } else {
        auto& incident = edgeElements_[it->second];
        if (incident[1] != -1) {
          throw StructuralError(
              fmt::format("non-manifold face ({}, {}): more than two incident elements", key[0], key[1]));
        }
        incident[1] = e;
      }
      elementEdges_[e][i] = it->second;
    }
  }

  h_ = 0.0;
  hMin_ = std::numeric_limits<double>::infinity();
  for (const auto& [a, b] : edges_) {
    const double len = (vertices_[b] - vertices_[a]).norm();
    h_ = std::max(h_, len);
    hMin_ = std::min(hMin_, len);
  }

  interiorFaces_.clear();
  faceOfEdge_.assign(edges_.size(), -1);
  for (int k = 0; k < static_cast<int>(edges_.size()); ++k) {
    const auto [e0, e1] = edgeElements_[k];
    if (e1 < 0) continue;
    InteriorFace face;
    face.vertices = edges_[k];
    face.plus = std::min(e0, e1);
    face.minus = std::max(e0, e1);
    face.edge = k;
    const Vec2 a = vertices_[face.vertices[0]];
    const Vec2 b = vertices_[face.vertices[1]];
    const Vec2 tangent = b - a;
    face.length = tangent.norm();
    Vec2 normal(tangent.y(), -tangent.x());
    normal /= face.length;
    // Orient away from the plus element: its opposite vertex lies behind the face.
    const auto& t = elements_[face.plus];
    int opposite = -1;
    for (int v : t) {
      if (v != face.vertices[0] && v != face.vertices[1]) opposite = v;
    }
    if (normal.dot(vertices_[opposite] - a) > 0.0) normal = -normal;
    face.normal = normal;
    faceOfEdge_[k] = static_cast<int>(interiorFaces_.size());
    interiorFaces_.push_back(face);
  }
}

BackgroundMesh build_structured_mesh(const Box& box, int n) {
  if (n < 1) throw ConfigurationError(fmt::format("subdivisions must be >= 1, got {}", n));
  if (!(box.width() > 0.0) || !(box.height() > 0.0)) {
    throw ConfigurationError("box must have positive width and height");
  }
  std::vector<Vec2> vertices;
  vertices.reserve(static_cast<std::size_t>((n + 1) * (n + 1)));
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      const double x = (i == n) ? box.upper.x() : box.lower.x() + i * (box.width() / n);
      const double y = (j == n) ? box.upper.y() : box.lower.y() + j * (box.height() / n);
      vertices.emplace_back(x, y);
    }
  }
  auto id = [n](int i, int j) { return j * (n + 1) + i; };
  std::vector<std::array<int, 3>> elements;
  elements.reserve(static_cast<std::size_t>(2 * n * n));
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int v00 = id(i, j), v10 = id(i + 1, j), v01 = id(i, j + 1), v11 = id(i + 1, j + 1);
      elements.push_back({v00, v10, v01});
      elements.push_back({v10, v11, v01});
    }
  }
  return BackgroundMesh(std::move(vertices), std::move(elements), box);
}

BackgroundMesh refine_uniform(const BackgroundMesh& mesh) {
  std::vector<Vec2> vertices = mesh.vertices();
  const int base = mesh.numVertices();
  for (const auto& [a, b] : mesh.edges()) {
    vertices.push_back(0.5 * (mesh.vertices()[a] + mesh.vertices()[b]));
  }
  std::vector<std::array<int, 3>> elements;
  elements.reserve(4 * mesh.elements().size());
  for (int e = 0; e < mesh.numElements(); ++e) {
    const auto& t = mesh.elements()[e];
    const auto& ed = mesh.elementEdges()[e];
    // m_i is the midpoint of the edge opposite vertex i.
    const int m0 = base + ed[0], m1 = base + ed[1], m2 = base + ed[2];
    elements.push_back({t[0], m2, m1});
    elements.push_back({m2, t[1], m0});
    elements.push_back({m1, m0, t[2]});
    elements.push_back({m0, m1, m2});
  }
  return BackgroundMesh(std::move(vertices), std::move(elements), mesh.box());
}

BackgroundMesh permute_elements(const BackgroundMesh& mesh, std::span<const int> permutation) {
  if (static_cast<int>(permutation.size()) != mesh.numElements()) {
    throw ConfigurationError("permutation size does not match element count");
  }
  std::vector<std::array<int, 3>> elements;
  elements.reserve(permutation.size());
  for (int old : permutation) elements.push_back(mesh.elements().at(old));
  return BackgroundMesh(mesh.vertices(), std::move(elements), mesh.box());
}

void write_mesh(std::ostream& out, const BackgroundMesh& mesh) {
  for (const auto& v : mesh.vertices()) out << fmt::format("v {:.17g} {:.17g}\n", v.x(), v.y());
  for (const auto& t : mesh.elements()) out << fmt::format("e {} {} {}\n", t[0], t[1], t[2]);
}

}  // namespace cutdg
