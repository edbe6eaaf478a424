#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "cutdg/space.hpp"
#include "support.hpp"

using namespace cutdg;

TEST_SUITE("space") {
  TEST_CASE("reference basis") {
    const auto mesh = testing::triangle_mesh(Vec2(0, 0), Vec2(1, 0), Vec2(0, 1));
    const auto c = evaluate_basis(mesh, 0, Vec2(1.0 / 3, 1.0 / 3));
    for (double v : c.values) CHECK(v == doctest::Approx(1.0 / 3));
    CHECK(c.gradients[0].isApprox(Vec2(-1, -1)));
    CHECK(c.gradients[1].isApprox(Vec2(1, 0)));
    CHECK(c.gradients[2].isApprox(Vec2(0, 1)));
    const auto v = evaluate_basis(mesh, 0, Vec2(1, 0));
    CHECK(v.values[0] == doctest::Approx(0.0));
    CHECK(v.values[1] == doctest::Approx(1.0));
    CHECK(v.values[2] == doctest::Approx(0.0));
  }

  TEST_CASE("partition of unity on a general mesh") {
    const auto mesh = build_structured_mesh(Box{Vec2(-1, -0.5), Vec2(2, 1)}, 3);
    for (int e = 0; e < mesh.numElements(); ++e) {
      const auto c = mesh.corners(e);
      const Vec2 x = 0.2 * c[0] + 0.5 * c[1] + 0.3 * c[2];
      const auto b = evaluate_basis(mesh, e, x);
      CHECK(b.values[0] + b.values[1] + b.values[2] == doctest::Approx(1.0));
      CHECK((b.gradients[0] + b.gradients[1] + b.gradients[2]).norm() <= 1e-12);
      CHECK(b.values[0] == doctest::Approx(0.2));
      // Linear reproduction.
      const Vec2 rep = b.values[0] * c[0] + b.values[1] * c[1] + b.values[2] * c[2];
      CHECK((rep - x).norm() <= 1e-13);
    }
  }

  TEST_CASE("dof map is a bijection with disjoint element blocks") {
    const auto d = testing::unit_disk(8);
    CHECK(d.dofs.bulkSize() == 3 * static_cast<int>(d.topo.activeBulk.size()));
    CHECK(d.dofs.surfaceSize() == 3 * static_cast<int>(d.topo.activeSurface.size()));
    std::set<int> seen;
    for (int e : d.topo.activeBulk) {
      for (int i : d.dofs.bulk.dofs(e)) {
        CHECK(i < d.dofs.bulkSize());
        seen.insert(i);
      }
    }
    for (int e : d.topo.activeSurface) {
      for (int i : d.dofs.surface.dofs(e)) {
        CHECK(i >= d.dofs.bulkSize());
        seen.insert(i);
      }
    }
    CHECK(static_cast<int>(seen.size()) == d.dofs.size());
    CHECK(*seen.rbegin() == d.dofs.size() - 1);
  }

  TEST_CASE("nodal interpolation and jumps") {
    const auto d = testing::unit_disk(8);
    auto jumps = [&](const Eigen::VectorXd& c) {
      double value = 0.0, grad = 0.0;
      for (int f : d.topo.bulkFaces) {
        const auto& face = d.mesh.interiorFaces()[f];
        for (int v : face.vertices) {
          const Vec2& x = d.mesh.vertices()[v];
          value = std::max(value, std::abs(evaluate(d.mesh, d.dofs.bulk, c, face.plus, x) -
                                           evaluate(d.mesh, d.dofs.bulk, c, face.minus, x)));
        }
        grad = std::max(grad, std::abs(face.normal.dot(evaluate_gradient(d.mesh, d.dofs.bulk, c, face.plus) -
                                                       evaluate_gradient(d.mesh, d.dofs.bulk, c, face.minus))));
      }
      return std::pair{value, grad};
    };
    const auto constant = interpolate_nodal(d.mesh, d.dofs.bulk, [](const Vec2&) { return 2.5; });
    for (int i = 0; i < constant.size(); ++i) CHECK(constant[i] == 2.5);
    CHECK(jumps(constant).first <= 1e-14);

    const auto linear = interpolate_nodal(d.mesh, d.dofs.bulk, [](const Vec2& x) { return 1 + 2 * x.x() - x.y(); });
    CHECK(jumps(linear).first <= 1e-14);
    CHECK(jumps(linear).second <= 1e-12);

    // Per cell the interpolant of x^2 has slope 2 x0 + dx, so only vertical
    // faces carry a normal-gradient jump, of size 2 dx.
    const auto square = interpolate_nodal(d.mesh, d.dofs.bulk, [](const Vec2& x) { return x.x() * x.x(); });
    const double dx = d.mesh.box().width() / 8;
    for (int f : d.topo.bulkFaces) {
      const auto& face = d.mesh.interiorFaces()[f];
      const double jump = face.normal.dot(evaluate_gradient(d.mesh, d.dofs.bulk, square, face.plus) -
                                          evaluate_gradient(d.mesh, d.dofs.bulk, square, face.minus));
      const bool vertical = std::abs(std::abs(face.normal.x()) - 1.0) < 1e-12;
      CHECK(std::abs(jump) == doctest::Approx(vertical ? 2 * dx : 0.0));
    }
    CHECK(jumps(square).second > 0.0);

    const auto full = interpolate_nodal(d.mesh, d.dofs.surface, [](const Vec2&) { return 1.0; }, d.dofs.size());
    CHECK(full.size() == d.dofs.size());
    CHECK(full.head(d.dofs.bulkSize()).norm() == 0.0);
    CHECK(full.tail(d.dofs.surfaceSize()).sum() == doctest::Approx(d.dofs.surfaceSize()));
  }

  TEST_CASE("coefficient text round trip") {
    Eigen::VectorXd c(4);
    c << 1.0, -2.5e-17, 3.14159265358979, 1e300;
    std::stringstream io;
    write_coefficients(io, c);
    const Eigen::VectorXd back = read_coefficients(io);
    CHECK(back == c);
  }
}
