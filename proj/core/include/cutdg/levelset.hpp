#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "cutdg/mesh.hpp"
#include "cutdg/types.hpp"

namespace cutdg {

/// Signed distance description of the surface: negative inside the bulk.
struct LevelSet {
  ScalarField rho;
  /// Closest point on the surface; only meaningful for |rho(x)| < validityRadius.
  VectorField closestPoint;
  /// Unit normal of the exact surface at a surface point.
  VectorField normal;
  double validityRadius = 0.0;
};

LevelSet circle_levelset(const Vec2& center, double radius);

/// Straight line through `point` with unit normal `normal` pointing outward.
LevelSet line_levelset(const Vec2& point, const Vec2& normal);

/// center + radius * (x - center) / |x - center|; throws DomainError at the center.
Vec2 closest_point_circle(const Vec2& x, const Vec2& center = Vec2::Zero(), double radius = 1.0);

/// Nodal values of the piecewise-linear interpolant of rho.
struct DiscreteLevelSet {
  std::vector<double> values;
  /// Values with |value| below this were replaced by -snapTolerance.
  double snapTolerance = 0.0;
};

inline constexpr double kSnapFactor = 1e-10;

DiscreteLevelSet interpolate_levelset(const LevelSet& ls, const BackgroundMesh& mesh);

/// Zero of the level-set interpolant on a mesh edge. The computation is
/// ordered by the sorted vertex pair so both incident elements obtain the
/// bit-identical point.
Vec2 edge_zero(const BackgroundMesh& mesh, const DiscreteLevelSet& dls, int a, int b);

/// A piece K = Gamma_h ∩ T of the discrete surface.
struct SurfaceSegment {
  int element = -1;
  std::array<int, 2> points{};  ///< indices into CutTopology::surfacePoints
  std::array<Vec2, 2> ends;
  Vec2 normal = Vec2::Zero();  ///< unit, points toward rho_h > 0
  double length = 0.0;
};

/// Intersection of Gamma_h with a mesh edge.
struct SurfacePoint {
  Vec2 x = Vec2::Zero();
  int meshEdge = -1;
};

/// Point E = K+ ∩ K- where two surface segments meet. Co-normals are unit
/// tangents of each segment pointing away from that segment.
struct SurfaceEdge {
  int point = -1;
  int plus = -1;   ///< segment index, lower of the two
  int minus = -1;
  Vec2 conormalPlus = Vec2::Zero();
  Vec2 conormalMinus = Vec2::Zero();
};

struct CutTopology {
  std::vector<int> activeBulk;     ///< sorted element indices
  std::vector<int> activeSurface;  ///< sorted, subset of activeBulk
  std::vector<char> inBulk;        ///< per background element
  std::vector<char> inSurface;
  std::vector<int> bulkFaces;           ///< interior faces with both elements in activeBulk
  std::vector<int> ghostBulkFaces;      ///< bulkFaces touching an activeSurface element
  std::vector<int> surfaceFaces;        ///< interior faces with both elements in activeSurface
  std::vector<SurfaceSegment> segments; ///< one per activeSurface element, same order
  std::vector<SurfacePoint> surfacePoints;
  std::vector<SurfaceEdge> surfaceEdges;
  std::vector<int> segmentOfElement;    ///< -1 where the element is not cut

  double surfaceLength() const;
};

/// Active meshes and face sets. Throws ConfigurationError if no element is
/// active.
CutTopology classify_elements(const BackgroundMesh& mesh, const DiscreteLevelSet& dls);

/// Fills segments, surface points and surface edges of `topo`.
void extract_surface_segments(const BackgroundMesh& mesh, const DiscreteLevelSet& dls, CutTopology& topo);

/// classify_elements followed by extract_surface_segments.
CutTopology build_cut_topology(const BackgroundMesh& mesh, const DiscreteLevelSet& dls);

struct GeometryDeviation {
  double supDist = 0.0;        ///< max |rho(x)| over sampled x on Gamma_h
  double supNormalDev = 0.0;   ///< max |n(p(x)) - n_h(x)|
};

GeometryDeviation check_geometry_assumptions(const LevelSet& ls, const CutTopology& topo,
                                             int samplesPerSegment = 8);

/// `s x0 y0 x1 y1` per segment.
void write_segments(std::ostream& out, const CutTopology& topo);

}  // namespace cutdg
