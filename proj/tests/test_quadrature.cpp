#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "cutdg/quadrature.hpp"
#include "cutdg/studies.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace cutdg;

namespace {

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

/// Integral of x^a y^b over the reference triangle.
double reference_moment(int a, int b) { return factorial(a) * factorial(b) / factorial(a + b + 2); }


}  // namespace

TEST_SUITE("quadrature") {
  TEST_CASE("triangle rules are exact on the reference triangle") {
    for (int degree = 0; degree <= 4; ++degree) {
      QuadratureRule r;
      append_triangle_rule(Vec2(0, 0), Vec2(1, 0), Vec2(0, 1), degree, r);
      for (double w : r.weights) CHECK(w > 0.0);
      for (int a = 0; a <= degree; ++a) {
        for (int b = 0; a + b <= degree; ++b) {
          const double q = r.integrate([&](const Vec2& x) { return std::pow(x.x(), a) * std::pow(x.y(), b); });
          CHECK(q == doctest::Approx(reference_moment(a, b)).epsilon(1e-13));
        }
      }
    }
    QuadratureRule r;
    CHECK_THROWS_AS(append_triangle_rule(Vec2(0, 0), Vec2(1, 0), Vec2(0, 1), 5, r), ConfigurationError);
  }

  TEST_CASE("segment rules") {
    QuadratureRule r;
    append_segment_rule(Vec2(0, 0), Vec2(1, 0), 2, r);
    CHECK(r.integrate([](const Vec2& x) { return x.x(); }) == doctest::Approx(0.5));
    CHECK(r.integrate([](const Vec2& x) { return x.x() * x.x(); }) == doctest::Approx(1.0 / 3));
    QuadratureRule r9;
    append_segment_rule(Vec2(0, 0), Vec2(2, 0), 9, r9);
    CHECK(r9.integrate([](const Vec2& x) { return std::pow(x.x(), 9); }) == doctest::Approx(102.4));
  }

  TEST_CASE("clipped reference triangle") {
    const auto mesh = testing::triangle_mesh(Vec2(0, 0), Vec2(1, 0), Vec2(0, 1));
    CHECK(clip_element_rule(mesh, 0, testing::values({-1, -1, -1})).totalWeight() == doctest::Approx(0.5));
    CHECK(clip_element_rule(mesh, 0, testing::values({-1, 1, 1})).totalWeight() == doctest::Approx(1.0 / 8));
    CHECK(clip_element_rule(mesh, 0, testing::values({1, -1, -1})).totalWeight() == doctest::Approx(3.0 / 8));
    CHECK(clip_element_rule(mesh, 0, testing::values({-1, 1, 1}), 2, true).totalWeight() == doctest::Approx(3.0 / 8));
    CHECK(clip_element_rule(mesh, 0, testing::values({1, 1, 1})).empty());
    CHECK(clip_element_rule(mesh, 0, testing::values({-1, 1, 1})).tag == DomainTag::BulkCut);
  }

  TEST_CASE("clipped moments match a slice oracle") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 6; ++trial) {
      std::array<Vec2, 3> p{Vec2(u(rng), u(rng)), Vec2(u(rng), u(rng)), Vec2(u(rng), u(rng))};
      if ((p[1] - p[0]).x() * (p[2] - p[0]).y() - (p[1] - p[0]).y() * (p[2] - p[0]).x() < 0) std::swap(p[1], p[2]);
      std::array<double, 3> phi{u(rng), u(rng), u(rng)};
      if (phi[0] * phi[1] > 0 && phi[1] * phi[2] > 0) phi[trial % 3] = -phi[trial % 3];
      const auto mesh = testing::triangle_mesh(p[0], p[1], p[2]);
      for (const bool complement : {false, true}) {
        std::array<double, 3> q = phi;
        if (complement) {
          for (auto& v : q) v = -v;
        }
        const auto rule = clip_element_rule(mesh, 0, testing::values({phi[0], phi[1], phi[2]}), 4, complement);
        for (int a = 0; a <= 4; ++a) {
          for (int b = 0; a + b <= 4; ++b) {
            const double exact = testing::slice_moment(p, q, a, b);
            const double got = rule.integrate([&](const Vec2& x) { return std::pow(x.x(), a) * std::pow(x.y(), b); });
            CHECK(got == doctest::Approx(exact).epsilon(1e-7).scale(1e-3));
          }
        }
      }
    }
  }

  TEST_CASE("segment rule of a cut element") {
    const auto mesh = testing::triangle_mesh(Vec2(0, 0), Vec2(1, 0), Vec2(0, 1));
    const auto topo = build_cut_topology(mesh, testing::values({-1, 1, 1}));
    const auto r = surface_segment_rule(topo.segments[0]);
    CHECK(r.totalWeight() == doctest::Approx(std::sqrt(2.0) / 2));
    SurfaceSegment degenerate;
    degenerate.ends = {Vec2(0, 0), Vec2(0, 0)};
    CHECK_THROWS_AS(surface_segment_rule(degenerate), StructuralError);
  }

  TEST_CASE("face rules") {
    const auto mesh = build_structured_mesh(Box{}, 1);
    const auto& f = mesh.interiorFaces()[0];
    const double len = f.length;
    std::vector<double> inside(4, -1.0);
    CHECK(cut_face_rule(mesh, f, testing::values(inside)).totalWeight() == doctest::Approx(len));
    CHECK(full_face_rule(mesh, f).totalWeight() == doctest::Approx(len));
    std::vector<double> half(4, -1.0);
    half[f.vertices[1]] = 1.0;
    CHECK(cut_face_rule(mesh, f, testing::values(half)).totalWeight() == doctest::Approx(len / 2));
    std::vector<double> outside(4, 1.0);
    outside[0] = -1.0;  // keeps something active, but not on the diagonal
    CHECK(cut_face_rule(mesh, f, testing::values(outside)).empty());
    CHECK(full_element_rule(testing::triangle_mesh(Vec2(0, 0), Vec2(2, 0), Vec2(0, 1)), 0).totalWeight() ==
          doctest::Approx(1.0));
    const auto p = surface_point_rule(Vec2(0.3, 0.4));
    CHECK(p.size() == 1);
    CHECK(p.weights[0] == 1.0);
  }

  TEST_CASE("partition of cut elements and the disk area") {
    std::vector<double> h, err;
    for (int k = 0; k < 4; ++k) {
      const auto d = testing::unit_disk(8 << k);
      double area = 0.0;
      for (int e : d.topo.activeBulk) area += clip_element_rule(d.mesh, e, d.dls).totalWeight();
      for (int e : d.topo.activeSurface) {
        const double both = clip_element_rule(d.mesh, e, d.dls).totalWeight() +
                            clip_element_rule(d.mesh, e, d.dls, 2, true).totalWeight();
        CHECK(both == doctest::Approx(d.mesh.area(e)).epsilon(1e-12));
      }
      h.push_back(d.h());
      err.push_back(std::abs(area - std::numbers::pi));
    }
    CHECK(testing::fit_slope(h, err) >= 1.8);
  }
}
