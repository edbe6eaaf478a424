#pragma once

#include <array>
#include <vector>

#include "cutdg/levelset.hpp"
#include "cutdg/mesh.hpp"
#include "cutdg/types.hpp"

namespace cutdg {

enum class DomainTag { BulkCut, SurfaceSegment, FaceCut, FullElement, FullFace, SurfacePoint };

struct QuadratureRule {
  std::vector<Vec2> points;
  std::vector<double> weights;
  DomainTag tag = DomainTag::FullElement;
  int degree = 0;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  double totalWeight() const;

  template <class F>
  double integrate(F&& f) const {
    double sum = 0.0;
    for (std::size_t q = 0; q < points.size(); ++q) sum += weights[q] * f(points[q]);
    return sum;
  }
};

inline constexpr int kDefaultDegree = 2;

/// Symmetric rule on a triangle, exact up to `degree` (supported: <= 4).
void append_triangle_rule(const Vec2& a, const Vec2& b, const Vec2& c, int degree, QuadratureRule& rule);

/// Gauss-Legendre rule on the segment [a, b], exact up to `degree` (<= 9).
void append_segment_rule(const Vec2& a, const Vec2& b, int degree, QuadratureRule& rule);

/// Rule on T ∩ {rho_h < 0}. Pass `negate` to integrate over T ∩ {rho_h > 0}.
QuadratureRule clip_element_rule(const BackgroundMesh& mesh, int element, const DiscreteLevelSet& dls,
                                 int degree = kDefaultDegree, bool negate = false);

QuadratureRule surface_segment_rule(const SurfaceSegment& segment, int degree = kDefaultDegree);

/// Rule on F ∩ {rho_h < 0}; empty (zero points) if F lies outside.
QuadratureRule cut_face_rule(const BackgroundMesh& mesh, const InteriorFace& face, const DiscreteLevelSet& dls,
                             int degree = kDefaultDegree);

QuadratureRule full_element_rule(const BackgroundMesh& mesh, int element, int degree = kDefaultDegree);
QuadratureRule full_face_rule(const BackgroundMesh& mesh, const InteriorFace& face, int degree = kDefaultDegree);

/// Unit-weight evaluation at a single point (edges of a 1D surface).
QuadratureRule surface_point_rule(const Vec2& x);

}  // namespace cutdg
