#include "cutdg/studies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace cutdg {

namespace {

std::string num(double v) { return fmt::format("{:.10e}", v); }

Eigen::MatrixXd block(const SparseMatrix& a, int start, int size) {
  return Eigen::MatrixXd(a).block(start, start, size, size);
}

double spread(const std::vector<double>& values) {
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (!(*lo > 0.0)) return std::numeric_limits<double>::infinity();
  return *hi / *lo;
}

std::vector<double> sweep_deltas(int positions) {
  if (positions < 2) throw ConfigurationError("a sweep needs at least 2 positions");
  std::vector<double> deltas;
  for (int l = 0; l < positions; ++l) deltas.push_back(static_cast<double>(l) / (positions - 1));
  return deltas;
}

/// Bulk DOFs of cut elements and of elements across a ghost face from one.
/// The remaining elements decouple in both gradient Grams.
std::vector<int> near_band_bulk_dofs(const Discretization& d) {
  std::vector<char> mark(d.mesh.elements().size(), 0);
  for (int e : d.topo.activeSurface) mark[e] = 1;
  for (int f : d.topo.ghostBulkFaces) {
    const auto& face = d.mesh.interiorFaces()[f];
    mark[face.plus] = mark[face.minus] = 1;
  }
  std::vector<int> out;
  for (int e : d.topo.activeBulk) {
    if (!mark[e]) continue;
    for (int i : d.dofs.bulk.dofs(e)) out.push_back(i);
  }
  return out;
}

Eigen::MatrixXd submatrix(const SparseMatrix& a, const std::vector<int>& idx) {
  const Eigen::MatrixXd full(a);
  return full(idx, idx);
}

int cells(int level, int n0) {
  if (level < 0 || n0 < 1) throw ConfigurationError(fmt::format("invalid level {} / n0 {}", level, n0));
  return n0 << level;
}

}  // namespace

Box default_box() { return Box{Vec2(-1.1, -1.1), Vec2(1.1, 1.1)}; }

BackgroundMesh level_mesh(int level, int n0, const Box& box) { return build_structured_mesh(box, cells(level, n0)); }

StudyReport run_convergence(const ConvergenceOptions& options) {
  if (options.levels < 3) throw ConfigurationError("convergence study needs at least 3 levels");
  const StabilizationParams params = options.ablateGhost ? options.params.ghostAblated() : options.params;
  params.validate();
  const ManufacturedProblem problem = build_circle_problem(options.cBulk, options.cSurf);
  StabilizationParams full = params;
  full.cBulk = options.cBulk;
  full.cSurf = options.cSurf;

  StudyReport report;
  for (int k = 0; k < options.levels; ++k) {
    ConvergenceRow row;
    row.level = k;
    const Discretization d = discretize(level_mesh(k, options.n0), problem.geometry);
    row.h = d.h();
    row.dofs = d.dofs.size();
    const AssembledSystem sys = assemble_system(d, problem.load(), full);
    try {
      const SolveResult res = solve(sys, options.solve);
      row.iterations = res.iterations;
      row.errors = compute_errors(d, problem, res.x);
    } catch (const SolverError& e) {
      row.solved = false;
      row.failure = e.what();
    }
    report.convergenceRows.push_back(row);
  }

  auto& rows = report.convergenceRows;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    if (!rows[k].solved || !rows[k - 1].solved) continue;
    const auto& a = rows[k - 1].errors;
    const auto& b = rows[k].errors;
    const std::array<double, 2> pairs[4] = {
        {a.h1Bulk, b.h1Bulk}, {a.l2Bulk, b.l2Bulk}, {a.h1Surf, b.h1Surf}, {a.l2Surf, b.l2Surf}};
    std::array<double, 4> rates{};
    bool ok = true;
    for (int i = 0; i < 4; ++i) {
      if (!(pairs[i][0] > 0.0) || !(pairs[i][1] > 0.0)) {
        ok = false;
        break;
      }
      rates[i] = eoc(pairs[i])[0];
    }
    if (ok) rows[k].eoc = rates;
  }
  return report;
}

std::array<double, 4> final_eoc_means(const std::vector<ConvergenceRow>& rows) {
  std::vector<std::array<double, 4>> rates;
  for (const auto& r : rows) {
    if (r.eoc) rates.push_back(*r.eoc);
  }
  if (rates.size() < 2) throw ConfigurationError("fewer than two EOC entries");
  std::array<double, 4> out{};
  for (int i = 0; i < 4; ++i) out[i] = 0.5 * (rates[rates.size() - 1][i] + rates[rates.size() - 2][i]);
  return out;
}

std::string to_string(StabConfig c) {
  switch (c) {
    case StabConfig::Full:
      return "full";
    case StabConfig::NoSurface:
      return "no-surface";
    case StabConfig::NoBulk:
      return "no-bulk";
    case StabConfig::None:
      return "none";
  }
  return "full";
}

StabConfig parse_stab_config(const std::string& name) {
  for (StabConfig c : {StabConfig::Full, StabConfig::NoSurface, StabConfig::NoBulk, StabConfig::None}) {
    if (to_string(c) == name) return c;
  }
  throw ConfigurationError(fmt::format("unknown stabilization config '{}'", name));
}

StabilizationParams apply_config(StabilizationParams p, StabConfig c) {
  if (c == StabConfig::NoSurface || c == StabConfig::None) p = p.withoutSurfaceGhost();
  if (c == StabConfig::NoBulk || c == StabConfig::None) p = p.withoutBulkGhost();
  return p;
}

Vec2 sweep_center(const BackgroundMesh& mesh, int n, double delta) {
  const double dx = mesh.box().width() / n;
  return Vec2::Constant((delta - 0.5) * dx);
}

StudyReport run_condition_sweep(const SweepOptions& options) {
  const int n = cells(options.level, options.n0);
  const BackgroundMesh mesh = level_mesh(options.level, options.n0);
  StudyReport report;
  for (StabConfig config : options.configs) {
    const StabilizationParams params = apply_config(options.params, config);
    params.validate();
    for (double delta : sweep_deltas(options.positions)) {
      ConditionRow row;
      row.delta = delta;
      row.config = to_string(config);
      const Discretization d = discretize(mesh, circle_levelset(sweep_center(mesh, n, delta), 1.0));
      AssembledSystem sys;
      sys.matrix = assemble_matrix(d, params);
      sys.dofs = d.dofs;
      sys.params = params;
      sys.h = d.h();
      try {
        const ConditionEstimate est = condition_number(rescaled_matrix(sys, options.surfaceExponent), options.condition);
        row.kappa = est.kappa;
        row.lambdaMin = est.lambdaMinNonzero;
        row.lambdaMax = est.lambdaMax;
      } catch (const SolverError&) {
        row.kappa = kDegenerateKappa;
        row.degenerate = true;
      }
      report.conditionRows.push_back(row);
    }
  }
  return report;
}

StudyReport run_condition_scaling(const ScalingOptions& options) {
  options.params.validate();
  const LevelSet circle = circle_levelset(Vec2::Zero(), 1.0);
  StudyReport report;
  for (int k = 0; k < options.levels; ++k) {
    const Discretization d = discretize(level_mesh(k, options.n0), circle);
    AssembledSystem sys;
    sys.matrix = assemble_matrix(d, options.params);
    sys.dofs = d.dofs;
    sys.params = options.params;
    sys.h = d.h();
    const ConditionEstimate est = condition_number(rescaled_matrix(sys, options.surfaceExponent), options.condition);
    report.scalingRows.push_back({k, d.h(), est.kappa, est.lambdaMinNonzero, est.lambdaMax, d.dofs.size()});
  }
  return report;
}

double kappa_spread(const std::vector<ConditionRow>& rows, const std::string& config) {
  std::vector<double> k;
  for (const auto& r : rows) {
    if (r.config == config) k.push_back(r.kappa);
  }
  if (k.empty()) throw ConfigurationError(fmt::format("no sweep rows for config '{}'", config));
  return spread(k);
}

StudyReport run_geometry_check(int levels, int n0, int samples) {
  if (levels < 3) throw ConfigurationError("geometry check needs at least 3 levels");
  const LevelSet circle = circle_levelset(Vec2::Zero(), 1.0);
  StudyReport report;
  for (int k = 0; k < levels; ++k) {
    const BackgroundMesh mesh = level_mesh(k, n0);
    const DiscreteLevelSet dls = interpolate_levelset(circle, mesh);
    const CutTopology topo = build_cut_topology(mesh, dls);
    const GeometryDeviation dev = check_geometry_assumptions(circle, topo, samples);
    report.geometryRows.push_back({k, mesh.h(), dev.supDist, dev.supNormalDev, topo.surfaceLength()});
  }
  return report;
}

StudyReport run_property_suite(const PropertyOptions& options) {
  options.params.validate();
  const int n = cells(options.level, options.n0);
  const BackgroundMesh mesh = level_mesh(options.level, options.n0);
  const StabilizationParams& p = options.params;
  const StabilizationParams noBulk = p.withoutBulkGhost();
  const StabilizationParams noSurf = p.withoutSurfaceGhost();

  std::vector<double> coercivity, equivalence, poincare, equivalenceOff, poincareOff;
  StudyReport report;
  const std::vector<double> deltas = sweep_deltas(options.positions);
  for (double delta : deltas) {
    const Discretization d = discretize(mesh, circle_levelset(sweep_center(mesh, n, delta), 1.0));
    const int nb = d.dofs.bulkSize();
    const int ns = d.dofs.surfaceSize();

    const PencilExtremes coer = generalized_extremes(
        Eigen::MatrixXd(assemble_matrix(d, p)), Eigen::MatrixXd(energy_gram(d, p, NormVariant::Total)), nullptr, 0.0, true);
    coercivity.push_back(coer.min);

    // Uncut elements away from the ghost faces contribute the eigenvalue 1.
    const std::vector<int> near = near_band_bulk_dofs(d);
    const double interior = static_cast<int>(near.size()) < nb ? 1.0 : 0.0;
    const Eigen::MatrixXd active = submatrix(bulk_gradient_gram(d, true), near);
    const SparseMatrix cut = bulk_gradient_gram(d, false);
    equivalence.push_back(
        std::max(interior, generalized_extremes(active, submatrix(cut + assemble_ghost_bulk(d, p), near)).max));
    equivalenceOff.push_back(
        std::max(interior, generalized_extremes(active, submatrix(cut + assemble_ghost_bulk(d, noBulk), near)).max));

    const Eigen::MatrixXd band = block(surface_band_mass(d), nb, ns) / d.h();
    const SparseMatrix grad = surface_gradient_gram(d);
    const Eigen::VectorXd mean = surface_mean_functional(d).tail(ns);
    poincare.push_back(
        generalized_extremes(band, block(grad + assemble_ghost_surface(d, p), nb, ns), &mean, 0.0, true).max);
    poincareOff.push_back(generalized_extremes(band, block(grad + assemble_ghost_surface(d, noSurf), nb, ns), &mean).max);
  }

  auto perDelta = [&](const std::string& name, const std::vector<double>& values, bool requirePositive) {
    for (std::size_t i = 0; i < deltas.size(); ++i) {
      const bool ok = std::isfinite(values[i]) && (!requirePositive || values[i] > 0.0);
      report.propertyRows.push_back({name, values[i], deltas[i], ok});
    }
  };
  perDelta("coercivity", coercivity, true);
  perDelta("ghost_equivalence", equivalence, true);
  perDelta("poincare", poincare, true);
  perDelta("ghost_equivalence_no_bulk_ghost", equivalenceOff, false);
  perDelta("poincare_no_surface_ghost", poincareOff, false);

  const double coerSpread = spread(coercivity);
  const bool coerPositive = *std::min_element(coercivity.begin(), coercivity.end()) > 0.0;
  report.propertyRows.push_back({"coercivity_spread", coerSpread, std::nullopt,
                                 coerPositive && coerSpread <= options.stableFactor});
  const double eqSpread = spread(equivalence);
  report.propertyRows.push_back({"ghost_equivalence_spread", eqSpread, std::nullopt, eqSpread <= options.stableFactor});
  const double pSpread = spread(poincare);
  report.propertyRows.push_back({"poincare_spread", pSpread, std::nullopt, pSpread <= options.stableFactor});
  const double eqOffSpread = spread(equivalenceOff);
  const double pOffSpread = spread(poincareOff);
  report.propertyRows.push_back({"ghost_equivalence_no_bulk_ghost_spread", eqOffSpread, std::nullopt,
                                 eqOffSpread >= options.ablationFactor});
  report.propertyRows.push_back(
      {"poincare_no_surface_ghost_spread", pOffSpread, std::nullopt, pOffSpread >= options.ablationFactor});
  report.propertyRows.push_back({"ablation_contrast", std::max(eqOffSpread, pOffSpread), std::nullopt,
                                 std::max(eqOffSpread, pOffSpread) >= options.ablationFactor});
  return report;
}

void write_convergence_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows) {
  out << "level,h,err_h1_bulk,eoc_h1_bulk,err_l2_bulk,eoc_l2_bulk,err_h1_surf,eoc_h1_surf,err_l2_surf,eoc_l2_surf\n";
  for (const auto& r : rows) {
    const std::array<double, 4> e{r.errors.h1Bulk, r.errors.l2Bulk, r.errors.h1Surf, r.errors.l2Surf};
    fmt::print(out, "{},{}", r.level, num(r.h));
    for (int i = 0; i < 4; ++i) {
      fmt::print(out, ",{},{}", r.solved ? num(e[i]) : "", r.eoc ? num((*r.eoc)[i]) : "");
    }
    out << '\n';
  }
}

void write_condition_csv(std::ostream& out, const std::vector<ConditionRow>& rows) {
  out << "delta,kappa,lambda_min,lambda_max,config\n";
  for (const auto& r : rows) {
    fmt::print(out, "{},{},{},{},{}\n", num(r.delta), num(r.kappa), num(r.lambdaMin), num(r.lambdaMax), r.config);
  }
}

void write_scaling_csv(std::ostream& out, const std::vector<ScalingRow>& rows) {
  out << "level,h,kappa,lambda_min,lambda_max,dofs\n";
  for (const auto& r : rows) {
    fmt::print(out, "{},{},{},{},{},{}\n", r.level, num(r.h), num(r.kappa), num(r.lambdaMin), num(r.lambdaMax), r.dofs);
  }
}

void write_geometry_csv(std::ostream& out, const std::vector<GeometryRow>& rows) {
  out << "level,sup_dist,sup_normal_dev\n";
  for (const auto& r : rows) fmt::print(out, "{},{},{}\n", r.level, num(r.supDist), num(r.supNormalDev));
}

void write_properties_csv(std::ostream& out, const std::vector<PropertyRow>& rows) {
  out << "name,constant,delta,pass\n";
  for (const auto& r : rows) {
    fmt::print(out, "{},{},{},{}\n", r.name, num(r.constant), r.delta ? num(*r.delta) : "", r.pass ? 1 : 0);
  }
}

}  // namespace cutdg
