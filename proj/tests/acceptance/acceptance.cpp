// Acceptance run: one PASS/FAIL line per criterion. Pass criterion numbers
// as arguments to run a subset.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "cutdg/problems.hpp"
#include "cutdg/quadrature.hpp"
#include "cutdg/solver.hpp"
#include "cutdg/studies.hpp"
#include "oracles.hpp"

using namespace cutdg;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

Outcome convergence() {
  ConvergenceOptions o;
  const auto rows = run_convergence(o).convergenceRows;
  const auto m = final_eoc_means(rows);
  const bool pass = m[0] >= 0.85 && m[0] <= 1.15 && m[2] >= 0.85 && m[2] <= 1.15 && m[1] >= 1.8 && m[1] <= 2.2 &&
                    m[3] >= 1.8 && m[3] <= 2.2;
  return {pass, fmt::format("final EOC means h1_bulk={:.3f} l2_bulk={:.3f} h1_surf={:.3f} l2_surf={:.3f}", m[0], m[1],
                            m[2], m[3])};
}

Outcome ablation() {
  ConvergenceOptions o;
  o.ablateGhost = true;
  const auto rows = run_convergence(o).convergenceRows;
  int failed = 0, nonPositive = 0;
  for (const auto& r : rows) {
    failed += !r.solved;
    if (r.eoc) nonPositive += static_cast<int>(std::count_if(r.eoc->begin(), r.eoc->end(), [](double e) { return e <= 0.0; }));
  }
  return {failed > 0 || nonPositive > 0,
          fmt::format("{} of {} levels failed to solve, {} EOC entries <= 0", failed, rows.size(), nonPositive)};
}

Outcome condition_scaling() {
  ScalingOptions o;
  const auto rows = run_condition_scaling(o).scalingRows;
  std::vector<double> h, k;
  for (const auto& r : rows) {
    h.push_back(r.h);
    k.push_back(r.kappa);
  }
  const double slope = loglog_slope(h, k);
  return {slope >= -2.5 && slope <= -1.6,
          fmt::format("slope of log kappa vs log h = {:.3f} (kappa {:.3e} .. {:.3e})", slope, k.front(), k.back())};
}

Outcome condition_robustness() {
  SweepOptions o;
  o.configs = {StabConfig::Full, StabConfig::NoSurface, StabConfig::NoBulk, StabConfig::None};
  const auto rows = run_condition_sweep(o).conditionRows;
  bool pass = true;
  std::string detail;
  for (StabConfig c : o.configs) {
    const double s = kappa_spread(rows, to_string(c));
    const bool ok = c == StabConfig::Full ? s <= 10.0 : s >= 1e2;
    pass &= ok;
    detail += fmt::format("{}={:.3e}{} ", to_string(c), s, ok ? "" : "(!)");
  }
  return {pass, "max/min kappa: " + detail};
}

Outcome geometry() {
  const auto rows = run_geometry_check(4).geometryRows;
  std::vector<double> h, dist, normal, length;
  for (const auto& r : rows) {
    h.push_back(r.h);
    dist.push_back(r.supDist);
    normal.push_back(r.supNormalDev);
    length.push_back(std::abs(r.length - 2 * std::numbers::pi));
  }
  const double sd = loglog_slope(h, dist), sn = loglog_slope(h, normal), sl = loglog_slope(h, length);
  return {sd >= 1.8 && sn >= 0.8 && sl >= 1.8,
          fmt::format("slopes sup_dist={:.3f} sup_normal_dev={:.3f} length={:.3f}", sd, sn, sl)};
}

Outcome quadrature() {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  int triangles = 0;
  while (triangles < 50) {
    std::array<Vec2, 3> p{Vec2(u(rng), u(rng)), Vec2(u(rng), u(rng)), Vec2(u(rng), u(rng))};
    const double area2 = (p[1] - p[0]).x() * (p[2] - p[0]).y() - (p[1] - p[0]).y() * (p[2] - p[0]).x();
    if (std::abs(area2) < 0.05) continue;
    if (area2 < 0) std::swap(p[1], p[2]);
    const std::array<double, 3> phi{u(rng), u(rng), u(rng)};
    if (std::min({phi[0], phi[1], phi[2]}) >= 0.0 || std::max({phi[0], phi[1], phi[2]}) <= 0.0) continue;
    ++triangles;
    const BackgroundMesh mesh({p[0], p[1], p[2]}, {{0, 1, 2}},
                              Box{p[0].cwiseMin(p[1]).cwiseMin(p[2]), p[0].cwiseMax(p[1]).cwiseMax(p[2])});
    const auto rule = clip_element_rule(mesh, 0, DiscreteLevelSet{{phi[0], phi[1], phi[2]}, 0.0}, 2);
    const double area = testing::slice_moment(p, phi, 0, 0);
    for (int a = 0; a <= 2; ++a) {
      for (int b = 0; a + b <= 2; ++b) {
        const double exact = testing::slice_moment(p, phi, a, b);
        const double got = rule.integrate([&](const Vec2& x) { return std::pow(x.x(), a) * std::pow(x.y(), b); });
        worst = std::max(worst, std::abs(got - exact) / std::max(std::abs(exact), 1e-3 * area));
      }
    }
  }
  std::vector<double> h, err;
  for (int level = 0; level < 4; ++level) {
    const Discretization d = discretize(level_mesh(level), circle_levelset(Vec2::Zero(), 1.0));
    double area = 0.0;
    for (int e : d.topo.activeBulk) area += clip_element_rule(d.mesh, e, d.dls).totalWeight();
    h.push_back(d.h());
    err.push_back(std::abs(area - std::numbers::pi));
  }
  const double slope = loglog_slope(h, err);
  return {worst <= 1e-6 && slope >= 1.8,
          fmt::format("worst relative moment error {:.2e} over 50 triangles, disk area slope {:.3f}", worst, slope)};
}

Outcome properties() {
  PropertyOptions o;
  o.positions = 101;
  const auto rows = run_property_suite(o).propertyRows;
  bool pass = true;
  std::string detail;
  for (const auto& r : rows) {
    if (r.delta) continue;
    if (r.name == "ghost_equivalence_no_bulk_ghost_spread" || r.name == "poincare_no_surface_ghost_spread") {
      detail += fmt::format("{}={:.3e} ", r.name, r.constant);
      continue;
    }
    pass &= r.pass;
    detail += fmt::format("{}={:.3e}{} ", r.name, r.constant, r.pass ? "" : "(!)");
  }
  return {pass, detail};
}

Outcome exactness() {
  double worst = 0.0;
  const Vec2 center(0.0123, -0.0311);
  const auto problem = build_affine_problem(circle_levelset(center, 1.0), 1.0, 1.0, 0.7, Vec2(1.3, -0.4), -0.2,
                                            Vec2(0.6, 0.9));
  for (int level = 0; level <= 4; ++level) {
    const Discretization d = discretize(level_mesh(level), problem.geometry);
    const auto sys = assemble_system(d, problem.load(), {});
    const auto sol = solve(sys, SolveOptions{1e-14, 0, SolveMethod::Direct});
    const auto e = compute_errors(d, problem, sol.x);
    worst = std::max({worst, e.h1Bulk, e.l2Bulk, e.h1Surf, e.l2Surf});
  }
  return {worst <= 1e-9, fmt::format("largest error norm over levels 0..4: {:.2e}", worst)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"convergence rates", convergence},
      {"ablation deteriorates", ablation},
      {"condition number scaling", condition_scaling},
      {"condition number robustness", condition_robustness},
      {"geometry approximation", geometry},
      {"cut quadrature", quadrature},
      {"stability properties", properties},
      {"affine exactness", exactness},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k) + 1;
    if (!only.empty() && !only.count(id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& ex) {
      o = {false, std::string("error: ") + ex.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !o.pass;
    fmt::print("[{}] criterion {} {}: {} ({:.1f} s)\n", o.pass ? "PASS" : "FAIL", id, criteria[k].first, o.detail,
               secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
