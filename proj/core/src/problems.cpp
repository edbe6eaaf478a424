#include "cutdg/problems.hpp"

#include <cmath>

#include <fmt/format.h>

namespace cutdg {

namespace {

/// Value and derivatives up to third order of
/// u(x, y) = scale * exp(-x(x-1) y(y-1)).
struct ExpAnsatz {
  double scale = 1.0;

  struct Jet {
    double u = 0.0;
    Vec2 grad = Vec2::Zero();
    Mat2 hess = Mat2::Zero();
    double third[2][2][2] = {};
  };

  Jet operator()(const Vec2& p) const {
    const double x = p.x(), y = p.y();
    const double a = x * x - x, b = y * y - y;
    const double da = 2 * x - 1, db = 2 * y - 1;
    // phi = -a b and its derivatives.
    const double phi[2] = {-da * b, -a * db};
    double phi2[2][2];
    phi2[0][0] = -2 * b;
    phi2[1][1] = -2 * a;
    phi2[0][1] = phi2[1][0] = -da * db;
    double phi3[2][2][2] = {};
    // Only the mixed third derivatives are nonzero.
    phi3[0][0][1] = phi3[0][1][0] = phi3[1][0][0] = -2 * db;
    phi3[0][1][1] = phi3[1][0][1] = phi3[1][1][0] = -2 * da;

    Jet j;
    j.u = scale * std::exp(-a * b);
    for (int i = 0; i < 2; ++i) j.grad[i] = j.u * phi[i];
    for (int i = 0; i < 2; ++i) {
      for (int k = 0; k < 2; ++k) j.hess(i, k) = j.u * (phi[i] * phi[k] + phi2[i][k]);
    }
    for (int i = 0; i < 2; ++i) {
      for (int k = 0; k < 2; ++k) {
        for (int l = 0; l < 2; ++l) {
          j.third[i][k][l] = j.u * (phi[l] * (phi[i] * phi[k] + phi2[i][k]) + phi2[i][l] * phi[k] +
                                    phi[i] * phi2[k][l] + phi3[i][k][l]);
        }
      }
    }
    return j;
  }
};

/// The ambient function w(x) = (n(x)·grad u(x) + c_bulk u(x)) / c_surf with
/// n(x) = (x - center) / R; on the circle it is the surface solution.
struct SurfaceAnsatz {
  ExpAnsatz bulk;
  Vec2 center;
  double radius;
  double cBulk;
  double cSurf;

  double value(const Vec2& x) const {
    const auto j = bulk(x);
    const Vec2 n = (x - center) / radius;
    return (n.dot(j.grad) + cBulk * j.u) / cSurf;
  }

  Vec2 grad(const Vec2& x) const {
    const auto j = bulk(x);
    const Vec2 n = (x - center) / radius;
    return (j.grad / radius + j.hess * n + cBulk * j.grad) / cSurf;
  }

  Mat2 hess(const Vec2& x) const {
    const auto j = bulk(x);
    const Vec2 n = (x - center) / radius;
    Mat2 h;
    for (int i = 0; i < 2; ++i) {
      for (int k = 0; k < 2; ++k) {
        double s = 2.0 * j.hess(i, k) / radius + cBulk * j.hess(i, k);
        for (int l = 0; l < 2; ++l) s += n[l] * j.third[l][i][k];
        h(i, k) = s / cSurf;
      }
    }
    return h;
  }

  /// Laplace-Beltrami on the circle: t^T H t - (1/R) n·grad.
  double surface_laplacian(const Vec2& y) const {
    const Vec2 n = (y - center) / radius;
    const Vec2 t(-n.y(), n.x());
    return t.dot(hess(y) * t) - n.dot(grad(y)) / radius;
  }
};

}  // namespace

LoadData ManufacturedProblem::load() const {
  LoadData data;
  data.fBulk = fBulk;
  data.fSurf = fSurf;
  if (discreteCorrections) {
    const auto ub = uBulk, us = uSurf;
    const auto gb = gradUBulk;
    const double cb = cBulk, cs = cSurf;
    data.bulkFluxMismatch = [=](const Vec2& x, const Vec2& nh) { return nh.dot(gb(x)) - cs * us(x) + cb * ub(x); };
    data.surfaceGradient = gradUSurf;
  }
  return data;
}

ManufacturedProblem build_circle_problem(double cBulk, double cSurf, const Vec2& center, double radius) {
  if (!(cBulk > 0.0) || !(cSurf > 0.0)) throw ConfigurationError("coupling coefficients must be positive");
  const ExpAnsatz bulk{cSurf};
  const SurfaceAnsatz surf{bulk, center, radius, cBulk, cSurf};

  ManufacturedProblem p;
  p.geometry = circle_levelset(center, radius);
  p.cBulk = cBulk;
  p.cSurf = cSurf;
  p.uBulk = [bulk](const Vec2& x) { return bulk(x).u; };
  p.gradUBulk = [bulk](const Vec2& x) -> Vec2 { return bulk(x).grad; };
  p.fBulk = [bulk](const Vec2& x) {
    const auto j = bulk(x);
    return -j.hess.trace() + j.u;
  };
  p.uSurf = [surf](const Vec2& x) { return surf.value(closest_point_circle(x, surf.center, surf.radius)); };
  p.gradUSurf = [surf](const Vec2& x) -> Vec2 {
    // grad(w∘p) = Dp^T grad w(p), Dp = R/|x-c| (I - nn^T).
    const Vec2 d = x - surf.center;
    const double r = d.norm();
    if (!(r > 0.0)) throw DomainError("closest point undefined at the circle center");
    const Vec2 n = d / r;
    const Vec2 py = surf.center + surf.radius * n;
    const Vec2 g = surf.grad(py);
    return (surf.radius / r) * (g - n.dot(g) * n);
  };
  p.fSurf = [surf, bulk](const Vec2& x) {
    const Vec2 y = closest_point_circle(x, surf.center, surf.radius);
    const Vec2 n = (y - surf.center) / surf.radius;
    return -surf.surface_laplacian(y) + surf.value(y) + n.dot(bulk(y).grad);
  };
  return p;
}

ManufacturedProblem build_affine_problem(const LevelSet& geometry, double cBulk, double cSurf, double a0,
                                         const Vec2& g, double b0, const Vec2& k) {
  if (!(cBulk > 0.0) || !(cSurf > 0.0)) throw ConfigurationError("coupling coefficients must be positive");
  ManufacturedProblem p;
  p.geometry = geometry;
  p.cBulk = cBulk;
  p.cSurf = cSurf;
  p.uBulk = [a0, g](const Vec2& x) { return a0 + g.dot(x); };
  p.gradUBulk = [g](const Vec2&) -> Vec2 { return g; };
  p.uSurf = [b0, k](const Vec2& x) { return b0 + k.dot(x); };
  p.gradUSurf = [k](const Vec2&) -> Vec2 { return k; };
  p.fBulk = p.uBulk;
  p.fSurf = [=](const Vec2& x) {
    const double ub = a0 + g.dot(x), us = b0 + k.dot(x);
    return us + cSurf * us - cBulk * ub;
  };
  p.discreteCorrections = true;
  return p;
}

ErrorReport compute_errors(const Discretization& d, const ManufacturedProblem& problem,
                           const Eigen::VectorXd& solution, int degree) {
  if (solution.size() != d.dofs.size()) throw ConfigurationError("solution length does not match the DOF map");
  double l2b = 0.0, semib = 0.0, l2s = 0.0, semis = 0.0;
  for (int e : d.topo.activeBulk) {
    const QuadratureRule rule = clip_element_rule(d.mesh, e, d.dls, degree);
    const Vec2 gh = evaluate_gradient(d.mesh, d.dofs.bulk, solution, e);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Vec2& x = rule.points[q];
      const double err = evaluate(d.mesh, d.dofs.bulk, solution, e, x) - problem.uBulk(x);
      l2b += rule.weights[q] * err * err;
      semib += rule.weights[q] * (gh - problem.gradUBulk(x)).squaredNorm();
    }
  }
  for (const auto& seg : d.topo.segments) {
    const int e = seg.element;
    const QuadratureRule rule = surface_segment_rule(seg, degree);
    const Mat2 proj = Mat2::Identity() - seg.normal * seg.normal.transpose();
    const Vec2 gh = evaluate_gradient(d.mesh, d.dofs.surface, solution, e);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Vec2& x = rule.points[q];
      const double err = evaluate(d.mesh, d.dofs.surface, solution, e, x) - problem.uSurf(x);
      l2s += rule.weights[q] * err * err;
      semis += rule.weights[q] * (proj * (gh - problem.gradUSurf(x))).squaredNorm();
    }
  }
  ErrorReport r;
  r.l2Bulk = std::sqrt(l2b);
  r.h1Bulk = std::sqrt(l2b + semib);
  r.l2Surf = std::sqrt(l2s);
  r.h1Surf = std::sqrt(l2s + semis);
  return r;
}

std::vector<double> eoc(std::span<const double> errors) {
  if (errors.size() < 2) throw ConfigurationError("EOC needs at least two levels");
  std::vector<double> rates;
  for (std::size_t k = 1; k < errors.size(); ++k) {
    if (!(errors[k - 1] > 0.0) || !(errors[k] > 0.0)) {
      throw ConfigurationError(fmt::format("EOC undefined for non-positive error at level {}", errors[k] > 0 ? k - 1 : k));
    }
    rates.push_back(std::log(errors[k - 1] / errors[k]) / std::log(2.0));
  }
  return rates;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw ConfigurationError("slope fit needs >= 2 matching samples");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw ConfigurationError("slope fit needs positive samples");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace cutdg
