#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <vector>

#include "cutdg/types.hpp"

namespace cutdg {

struct Box {
  Vec2 lower{0.0, 0.0};
  Vec2 upper{1.0, 1.0};

  double width() const { return upper.x() - lower.x(); }
  double height() const { return upper.y() - lower.y(); }
  double area() const { return width() * height(); }
};

/// An interior face shared by two triangles. `normal` is the unit normal
/// pointing out of `plus` into `minus`; `plus` is always the lower element
/// index.
struct InteriorFace {
  std::array<int, 2> vertices{};
  int plus = -1;
  int minus = -1;
  int edge = -1;
  Vec2 normal = Vec2::Zero();
  double length = 0.0;
};

/// Conforming triangulation of an axis-aligned box.
///
/// Edges are numbered globally; `elementEdges[e][i]` is the edge opposite
/// local vertex i of element e. Edge vertex pairs are stored sorted.
class BackgroundMesh {
 public:
  BackgroundMesh() = default;
  BackgroundMesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> elements, Box box);

  const std::vector<Vec2>& vertices() const { return vertices_; }
  const std::vector<std::array<int, 3>>& elements() const { return elements_; }
  const std::vector<std::array<int, 2>>& edges() const { return edges_; }
  const std::vector<std::array<int, 3>>& elementEdges() const { return elementEdges_; }
  /// Elements incident to each edge; second entry is -1 on the boundary.
  const std::vector<std::array<int, 2>>& edgeElements() const { return edgeElements_; }
  const std::vector<InteriorFace>& interiorFaces() const { return interiorFaces_; }
  /// Interior face index for each edge, -1 for boundary edges.
  const std::vector<int>& faceOfEdge() const { return faceOfEdge_; }

  const Box& box() const { return box_; }
  /// Longest edge length over the mesh.
  double h() const { return h_; }
  double shortestEdge() const { return hMin_; }

  int numVertices() const { return static_cast<int>(vertices_.size()); }
  int numElements() const { return static_cast<int>(elements_.size()); }

  std::array<Vec2, 3> corners(int element) const;
  double signedArea(int element) const;
  double area(int element) const { return signedArea(element); }

 private:
  void buildConnectivity();

  std::vector<Vec2> vertices_;
  std::vector<std::array<int, 3>> elements_;
  std::vector<std::array<int, 2>> edges_;
  std::vector<std::array<int, 3>> elementEdges_;
  std::vector<std::array<int, 2>> edgeElements_;
  std::vector<InteriorFace> interiorFaces_;
  std::vector<int> faceOfEdge_;
  Box box_;
  double h_ = 0.0;
  double hMin_ = 0.0;
};

/// n x n grid of cells over `box`, each cell split along its anti-diagonal
/// (lower-right to upper-left corner) into two counter-clockwise triangles.
BackgroundMesh build_structured_mesh(const Box& box, int n);

/// Red refinement: each triangle becomes four similar children. Parent
/// vertices keep their indices and coordinates.
BackgroundMesh refine_uniform(const BackgroundMesh& mesh);

/// Returns the mesh with elements reordered so that new element k is old
/// element `permutation[k]`. Vertex numbering is unchanged.
BackgroundMesh permute_elements(const BackgroundMesh& mesh, std::span<const int> permutation);

/// Plain-text dump: `v x y` per vertex, then `e i j k` per element.
void write_mesh(std::ostream& out, const BackgroundMesh& mesh);

}  // namespace cutdg
