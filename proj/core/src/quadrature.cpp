#include "cutdg/quadrature.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace cutdg {

namespace {

struct Node1D {
  double x;
  double w;
};

// Gauss-Legendre nodes on [-1, 1].
const std::vector<Node1D>& gauss_legendre(int n) {
  static const std::vector<std::vector<Node1D>> table = {
      {{0.0, 2.0}},
      {{-0.57735026918962576, 1.0}, {0.57735026918962576, 1.0}},
      {{-0.77459666924148338, 0.55555555555555556},
       {0.0, 0.88888888888888889},
       {0.77459666924148338, 0.55555555555555556}},
      {{-0.86113631159405258, 0.34785484513745386},
       {-0.33998104358485626, 0.65214515486254614},
       {0.33998104358485626, 0.65214515486254614},
       {0.86113631159405258, 0.34785484513745386}},
      {{-0.90617984593866399, 0.23692688505618909},
       {-0.53846931010568309, 0.47862867049936647},
       {0.0, 0.56888888888888889},
       {0.53846931010568309, 0.47862867049936647},
       {0.90617984593866399, 0.23692688505618909}},
  };
  if (n < 1 || n > static_cast<int>(table.size())) {
    throw ConfigurationError(fmt::format("no Gauss rule with {} points", n));
  }
  return table[n - 1];
}

struct TriNode {
  double l0, l1, l2;
  double w;  // fraction of the triangle area
};

const std::vector<TriNode>& triangle_nodes(int degree) {
  static const std::vector<TriNode> centroid = {{1.0 / 3, 1.0 / 3, 1.0 / 3, 1.0}};
  static const std::vector<TriNode> three = {
      {2.0 / 3, 1.0 / 6, 1.0 / 6, 1.0 / 3},
      {1.0 / 6, 2.0 / 3, 1.0 / 6, 1.0 / 3},
      {1.0 / 6, 1.0 / 6, 2.0 / 3, 1.0 / 3},
  };
  // Six-point rule of degree 4.
  static const std::vector<TriNode> six = [] {
    const double a = 0.44594849091596489, wa = 0.22338158967801147;
    const double b = 0.09157621350977073, wb = 0.10995174365532187;
    return std::vector<TriNode>{
        {1 - 2 * a, a, a, wa}, {a, 1 - 2 * a, a, wa}, {a, a, 1 - 2 * a, wa},
        {1 - 2 * b, b, b, wb}, {b, 1 - 2 * b, b, wb}, {b, b, 1 - 2 * b, wb},
    };
  }();
  if (degree <= 1) return centroid;
  if (degree == 2) return three;
  if (degree <= 4) return six;
  throw ConfigurationError(fmt::format("triangle rules available up to degree 4, requested {}", degree));
}

double triangle_area(const Vec2& a, const Vec2& b, const Vec2& c) {
  const Vec2 u = b - a, v = c - a;
  return 0.5 * std::abs(u.x() * v.y() - u.y() * v.x());
}

}  // namespace

double QuadratureRule::totalWeight() const {
  double sum = 0.0;
  for (double w : weights) sum += w;
  return sum;
}

void append_triangle_rule(const Vec2& a, const Vec2& b, const Vec2& c, int degree, QuadratureRule& rule) {
  const double area = triangle_area(a, b, c);
  for (const auto& n : triangle_nodes(degree)) {
    rule.points.push_back(n.l0 * a + n.l1 * b + n.l2 * c);
    rule.weights.push_back(n.w * area);
  }
}

void append_segment_rule(const Vec2& a, const Vec2& b, int degree, QuadratureRule& rule) {
  const double half = 0.5 * (b - a).norm();
  const Vec2 mid = 0.5 * (a + b);
  const Vec2 dir = 0.5 * (b - a);
  for (const auto& n : gauss_legendre(degree / 2 + 1)) {
    rule.points.push_back(mid + n.x * dir);
    rule.weights.push_back(n.w * half);
  }
}

QuadratureRule clip_element_rule(const BackgroundMesh& mesh, int element, const DiscreteLevelSet& dls, int degree,
                                 bool negate) {
  QuadratureRule rule;
  rule.tag = DomainTag::BulkCut;
  rule.degree = degree;
  const auto& t = mesh.elements()[element];
  const auto x = mesh.corners(element);
  auto inside = [&](int i) { return negate ? dls.values[t[i]] > 0.0 : dls.values[t[i]] < 0.0; };

  int count = 0;
  for (int i = 0; i < 3; ++i) count += inside(i) ? 1 : 0;
  if (count == 0) return rule;
  if (count == 3) {
    append_triangle_rule(x[0], x[1], x[2], degree, rule);
    return rule;
  }
  // Rotate so that local vertex `k` is the odd one out.
  int k = 0;
  for (int i = 0; i < 3; ++i) {
    if (inside(i) == (count == 1)) k = i;
  }
  const int i1 = (k + 1) % 3, i2 = (k + 2) % 3;
  const Vec2 z1 = edge_zero(mesh, dls, t[k], t[i1]);
  const Vec2 z2 = edge_zero(mesh, dls, t[k], t[i2]);
  if (count == 1) {
    append_triangle_rule(x[k], z1, z2, degree, rule);
  } else {
    // Quadrilateral z1, x[i1], x[i2], z2 split along the diagonal z1-x[i2].
    append_triangle_rule(z1, x[i1], x[i2], degree, rule);
    append_triangle_rule(z1, x[i2], z2, degree, rule);
  }
  return rule;
}

QuadratureRule surface_segment_rule(const SurfaceSegment& segment, int degree) {
  if (!(segment.length > 0.0)) throw StructuralError("quadrature on a degenerate surface segment");
  QuadratureRule rule;
  rule.tag = DomainTag::SurfaceSegment;
  rule.degree = degree;
  append_segment_rule(segment.ends[0], segment.ends[1], degree, rule);
  return rule;
}

QuadratureRule cut_face_rule(const BackgroundMesh& mesh, const InteriorFace& face, const DiscreteLevelSet& dls,
                             int degree) {
  QuadratureRule rule;
  rule.tag = DomainTag::FaceCut;
  rule.degree = degree;
  const int a = face.vertices[0], b = face.vertices[1];
  const bool ina = dls.values[a] < 0.0, inb = dls.values[b] < 0.0;
  const Vec2& xa = mesh.vertices()[a];
  const Vec2& xb = mesh.vertices()[b];
  if (ina && inb) {
    append_segment_rule(xa, xb, degree, rule);
  } else if (ina || inb) {
    const Vec2 z = edge_zero(mesh, dls, a, b);
    append_segment_rule(ina ? xa : xb, z, degree, rule);
  }
  return rule;
}

QuadratureRule full_element_rule(const BackgroundMesh& mesh, int element, int degree) {
  QuadratureRule rule;
  rule.tag = DomainTag::FullElement;
  rule.degree = degree;
  const auto x = mesh.corners(element);
  append_triangle_rule(x[0], x[1], x[2], degree, rule);
  return rule;
}

QuadratureRule full_face_rule(const BackgroundMesh& mesh, const InteriorFace& face, int degree) {
  QuadratureRule rule;
  rule.tag = DomainTag::FullFace;
  rule.degree = degree;
  append_segment_rule(mesh.vertices()[face.vertices[0]], mesh.vertices()[face.vertices[1]], degree, rule);
  return rule;
}

QuadratureRule surface_point_rule(const Vec2& x) {
  QuadratureRule rule;
  rule.tag = DomainTag::SurfacePoint;
  rule.degree = std::numeric_limits<int>::max();
  rule.points.push_back(x);
  rule.weights.push_back(1.0);
  return rule;
}

}  // namespace cutdg
