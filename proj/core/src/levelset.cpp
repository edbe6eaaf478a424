#include "cutdg/levelset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <fmt/format.h>

namespace cutdg {

Vec2 closest_point_circle(const Vec2& x, const Vec2& center, double radius) {
  const Vec2 d = x - center;
  const double r = d.norm();
  if (!(r > 0.0)) {
    throw DomainError("closest point undefined at the circle center");
  }
  return center + (radius / r) * d;
}

LevelSet circle_levelset(const Vec2& center, double radius) {
  if (!(radius > 0.0)) throw ConfigurationError("circle radius must be positive");
  LevelSet ls;
  ls.rho = [center, radius](const Vec2& x) { return (x - center).norm() - radius; };
  ls.closestPoint = [center, radius](const Vec2& x) { return closest_point_circle(x, center, radius); };
  ls.normal = [center](const Vec2& x) -> Vec2 {
    const Vec2 d = x - center;
    const double r = d.norm();
    if (!(r > 0.0)) throw DomainError("circle normal undefined at the center");
    return d / r;
  };
  ls.validityRadius = radius;
  return ls;
}

LevelSet line_levelset(const Vec2& point, const Vec2& normal) {
  const double len = normal.norm();
  if (!(len > 0.0)) throw ConfigurationError("line normal must be nonzero");
  const Vec2 n = normal / len;
  LevelSet ls;
  ls.rho = [point, n](const Vec2& x) { return n.dot(x - point); };
  ls.closestPoint = [point, n](const Vec2& x) -> Vec2 { return x - n.dot(x - point) * n; };
  ls.normal = [n](const Vec2&) -> Vec2 { return n; };
  ls.validityRadius = std::numeric_limits<double>::infinity();
  return ls;
}

DiscreteLevelSet interpolate_levelset(const LevelSet& ls, const BackgroundMesh& mesh) {
  DiscreteLevelSet dls;
  dls.snapTolerance = kSnapFactor * mesh.h();
  dls.values.reserve(mesh.vertices().size());
  for (const auto& v : mesh.vertices()) {
    double value = ls.rho(v);
    if (std::abs(value) < dls.snapTolerance) value = -dls.snapTolerance;
    dls.values.push_back(value);
  }
  return dls;
}

Vec2 edge_zero(const BackgroundMesh& mesh, const DiscreteLevelSet& dls, int a, int b) {
  if (a > b) std::swap(a, b);
  const double va = dls.values[a];
  const double vb = dls.values[b];
  const double t = va / (va - vb);
  const Vec2& xa = mesh.vertices()[a];
  const Vec2& xb = mesh.vertices()[b];
  return xa + t * (xb - xa);
}

double CutTopology::surfaceLength() const {
  double total = 0.0;
  for (const auto& s : segments) total += s.length;
  return total;
}

CutTopology classify_elements(const BackgroundMesh& mesh, const DiscreteLevelSet& dls) {
  if (static_cast<int>(dls.values.size()) != mesh.numVertices()) {
    throw ConfigurationError("level-set values do not match the mesh");
  }
  CutTopology topo;
  const int ne = mesh.numElements();
  topo.inBulk.assign(ne, 0);
  topo.inSurface.assign(ne, 0);
  for (int e = 0; e < ne; ++e) {
    const auto& t = mesh.elements()[e];
    double lo = dls.values[t[0]], hi = lo;
    for (int i = 1; i < 3; ++i) {
      lo = std::min(lo, dls.values[t[i]]);
      hi = std::max(hi, dls.values[t[i]]);
    }
    if (lo < 0.0) {
      topo.inBulk[e] = 1;
      topo.activeBulk.push_back(e);
      if (hi > 0.0) {
        topo.inSurface[e] = 1;
        topo.activeSurface.push_back(e);
      }
    }
  }
  if (topo.activeBulk.empty()) {
    throw ConfigurationError("active bulk mesh is empty: the surface does not enclose any vertex");
  }
  const auto& faces = mesh.interiorFaces();
  for (int f = 0; f < static_cast<int>(faces.size()); ++f) {
    const int p = faces[f].plus, m = faces[f].minus;
    if (topo.inBulk[p] && topo.inBulk[m]) {
      topo.bulkFaces.push_back(f);
      if (topo.inSurface[p] || topo.inSurface[m]) topo.ghostBulkFaces.push_back(f);
    }
    if (topo.inSurface[p] && topo.inSurface[m]) topo.surfaceFaces.push_back(f);
  }
  return topo;
}

void extract_surface_segments(const BackgroundMesh& mesh, const DiscreteLevelSet& dls, CutTopology& topo) {
  topo.segments.clear();
  topo.surfacePoints.clear();
  topo.surfaceEdges.clear();
  topo.segmentOfElement.assign(mesh.numElements(), -1);

  std::vector<int> pointOfEdge(mesh.edges().size(), -1);
  const double minLength = 1e-14 * mesh.h();

  for (int e : topo.activeSurface) {
    const auto& t = mesh.elements()[e];
    SurfaceSegment seg;
    seg.element = e;
    int found = 0;
    for (int i = 0; i < 3; ++i) {
      const int a = t[(i + 1) % 3], b = t[(i + 2) % 3];
      if ((dls.values[a] < 0.0) == (dls.values[b] < 0.0)) continue;
      if (found == 2) throw StructuralError(fmt::format("element {} has more than two cut edges", e));
      const int edge = mesh.elementEdges()[e][i];
      if (pointOfEdge[edge] < 0) {
        pointOfEdge[edge] = static_cast<int>(topo.surfacePoints.size());
        topo.surfacePoints.push_back({edge_zero(mesh, dls, a, b), edge});
      }
      seg.points[found] = pointOfEdge[edge];
      seg.ends[found] = topo.surfacePoints[pointOfEdge[edge]].x;
      ++found;
    }
    if (found != 2) throw StructuralError(fmt::format("element {} has {} cut edges, expected 2", e, found));

    seg.length = (seg.ends[1] - seg.ends[0]).norm();
    if (!(seg.length >= minLength)) {
      throw StructuralError(fmt::format("degenerate surface segment in element {} (length {})", e, seg.length));
    }
    // Gradient of the linear interpolant: sum_i value_i * grad(lambda_i).
    const auto x = mesh.corners(e);
    const double twiceArea = 2.0 * mesh.signedArea(e);
    Vec2 grad = Vec2::Zero();
    for (int i = 0; i < 3; ++i) {
      const Vec2 edgeVec = x[(i + 2) % 3] - x[(i + 1) % 3];
      grad += dls.values[t[i]] * Vec2(-edgeVec.y(), edgeVec.x()) / twiceArea;
    }
    seg.normal = grad.normalized();

    topo.segmentOfElement[e] = static_cast<int>(topo.segments.size());
    topo.segments.push_back(seg);
  }

  std::vector<std::array<int, 2>> incident(topo.surfacePoints.size(), {-1, -1});
  for (int s = 0; s < static_cast<int>(topo.segments.size()); ++s) {
    for (int p : topo.segments[s].points) {
      auto& slot = incident[p];
      if (slot[0] < 0) {
        slot[0] = s;
      } else if (slot[1] < 0) {
        slot[1] = s;
      } else {
        throw StructuralError(fmt::format("surface point {} shared by more than two segments", p));
      }
    }
  }
  auto conormal = [&](int s, int p) -> Vec2 {
    const auto& seg = topo.segments[s];
    const int here = seg.points[0] == p ? 0 : 1;
    return (seg.ends[here] - seg.ends[1 - here]) / seg.length;
  };
  for (int p = 0; p < static_cast<int>(incident.size()); ++p) {
    const auto [s0, s1] = incident[p];
    if (s1 < 0) continue;  // surface leaves the box
    SurfaceEdge edge;
    edge.point = p;
    edge.plus = std::min(s0, s1);
    edge.minus = std::max(s0, s1);
    edge.conormalPlus = conormal(edge.plus, p);
    edge.conormalMinus = conormal(edge.minus, p);
    topo.surfaceEdges.push_back(edge);
  }
}

CutTopology build_cut_topology(const BackgroundMesh& mesh, const DiscreteLevelSet& dls) {
  CutTopology topo = classify_elements(mesh, dls);
  extract_surface_segments(mesh, dls, topo);
  return topo;
}

GeometryDeviation check_geometry_assumptions(const LevelSet& ls, const CutTopology& topo, int samplesPerSegment) {
  if (samplesPerSegment < 1) throw ConfigurationError("samplesPerSegment must be >= 1");
  GeometryDeviation dev;
  for (const auto& seg : topo.segments) {
    for (int k = 0; k < samplesPerSegment; ++k) {
      const double t = samplesPerSegment == 1 ? 0.5 : static_cast<double>(k) / (samplesPerSegment - 1);
      const Vec2 x = seg.ends[0] + t * (seg.ends[1] - seg.ends[0]);
      const double r = ls.rho(x);
      if (!(std::abs(r) < ls.validityRadius)) {
        throw DomainError(fmt::format("sample ({}, {}) lies outside the closest-point neighborhood", x.x(), x.y()));
      }
      dev.supDist = std::max(dev.supDist, std::abs(r));
      const Vec2 n = ls.normal(ls.closestPoint(x));
      dev.supNormalDev = std::max(dev.supNormalDev, (n - seg.normal).norm());
    }
  }
  return dev;
}

void write_segments(std::ostream& out, const CutTopology& topo) {
  for (const auto& s : topo.segments) {
    out << fmt::format("s {:.17g} {:.17g} {:.17g} {:.17g}\n", s.ends[0].x(), s.ends[0].y(), s.ends[1].x(),
                       s.ends[1].y());
  }
}

}  // namespace cutdg
