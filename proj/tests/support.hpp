#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "cutdg/forms.hpp"
#include "cutdg/levelset.hpp"
#include "cutdg/mesh.hpp"

namespace testing {

using cutdg::Vec2;

inline cutdg::BackgroundMesh triangle_mesh(const Vec2& a, const Vec2& b, const Vec2& c) {
  const Vec2 lo = a.cwiseMin(b).cwiseMin(c), hi = a.cwiseMax(b).cwiseMax(c);
  return cutdg::BackgroundMesh({a, b, c}, {{0, 1, 2}}, cutdg::Box{lo, hi});
}

inline cutdg::DiscreteLevelSet values(std::vector<double> v) { return cutdg::DiscreteLevelSet{std::move(v), 0.0}; }

/// Level set that is negative everywhere in the box, so nothing is cut.
inline cutdg::LevelSet far_line() { return cutdg::line_levelset(Vec2(100.0, 0.0), Vec2(1.0, 0.0)); }

inline cutdg::Discretization unit_disk(int n, const Vec2& center = Vec2::Zero()) {
  const cutdg::Box box{Vec2(-1.1, -1.1), Vec2(1.1, 1.1)};
  return cutdg::discretize(cutdg::build_structured_mesh(box, n), cutdg::circle_levelset(center, 1.0));
}

/// v^T A w
inline double form(const cutdg::SparseMatrix& a, const Eigen::VectorXd& v, const Eigen::VectorXd& w) {
  return v.dot(a * w);
}

inline double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace testing
