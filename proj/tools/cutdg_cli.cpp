#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "cutdg/studies.hpp"

namespace fs = std::filesystem;
using namespace cutdg;

namespace {

void add_params(CLI::App* cmd, StabilizationParams& p) {
  cmd->add_option("--gamma-bulk", p.gammaBulk, "bulk interior penalty")->capture_default_str();
  cmd->add_option("--gamma-surf", p.gammaSurf, "surface interior penalty")->capture_default_str();
  cmd->add_option("--mu-bulk", p.muBulk, "bulk ghost penalty (jumps)")->capture_default_str();
  cmd->add_option("--mu-surf", p.muSurf, "surface ghost penalty (jumps)")->capture_default_str();
  cmd->add_option("--tau-bulk", p.tauBulk, "bulk ghost penalty (normal gradients)")->capture_default_str();
  cmd->add_option("--tau-surf", p.tauSurf, "surface ghost penalty (normal gradients)")->capture_default_str();
}

std::ofstream open_csv(const fs::path& dir, const std::string& name) {
  fs::create_directories(dir);
  std::ofstream out(dir / name);
  if (!out) throw Error(fmt::format("cannot write {}", (dir / name).string()));
  return out;
}

std::string fmt_opt(bool ok, double v) { return ok ? fmt::format("{:10.3e}", v) : fmt::format("{:>10}", "-"); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stabilized cut DG experiments for a coupled bulk-surface problem"};
  app.set_config("--config", "", "key=value configuration file; command-line flags take precedence");
  app.require_subcommand(1);
  app.fallthrough();
  std::string outDir = ".";
  app.add_option("--out", outDir, "output directory for CSV files")->capture_default_str();

  ConvergenceOptions conv;
  auto* convCmd = app.add_subcommand("convergence", "EOC study for the manufactured circle problem");
  convCmd->add_option("--levels", conv.levels, "number of refinement levels")->capture_default_str();
  convCmd->add_option("--n0", conv.n0, "cells per direction at level 0")->capture_default_str();
  convCmd->add_option("--c-bulk", conv.cBulk, "bulk coupling coefficient")->capture_default_str();
  convCmd->add_option("--c-surf", conv.cSurf, "surface coupling coefficient")->capture_default_str();
  convCmd->add_flag("--ablate-ghost", conv.ablateGhost, "set mu_surf = tau_bulk = tau_surf = 0");
  add_params(convCmd, conv.params);

  SweepOptions sweep;
  std::vector<std::string> configs{"full"};
  auto* sweepCmd = app.add_subcommand("condition-sweep", "condition number over translated circles");
  sweepCmd->add_option("--level", sweep.level, "refinement level")->capture_default_str();
  sweepCmd->add_option("--n0", sweep.n0)->capture_default_str();
  sweepCmd->add_option("--positions", sweep.positions, "number of offsets in [0, 1]")->capture_default_str();
  sweepCmd->add_option("--config", configs, "full, no-surface, no-bulk, none (repeatable)")
      ->check(CLI::IsMember({"full", "no-surface", "no-bulk", "none"}))
      ->capture_default_str();
  sweepCmd->add_option("--surface-exponent", sweep.surfaceExponent, "surface DOF scaling h^e")->capture_default_str();
  add_params(sweepCmd, sweep.params);

  ScalingOptions scaling;
  auto* scalingCmd = app.add_subcommand("condition-scaling", "condition number under refinement");
  scalingCmd->add_option("--levels", scaling.levels)->capture_default_str();
  scalingCmd->add_option("--n0", scaling.n0)->capture_default_str();
  scalingCmd->add_option("--surface-exponent", scaling.surfaceExponent)->capture_default_str();
  add_params(scalingCmd, scaling.params);

  int geoLevels = 4, geoN0 = 8;
  auto* geoCmd = app.add_subcommand("geometry-check", "distance and normal deviation of the discrete circle");
  geoCmd->add_option("--levels", geoLevels)->capture_default_str();
  geoCmd->add_option("--n0", geoN0)->capture_default_str();

  PropertyOptions props;
  auto* propCmd = app.add_subcommand("properties", "coercivity, ghost-penalty and Poincare constants");
  propCmd->add_option("--level", props.level)->capture_default_str();
  propCmd->add_option("--n0", props.n0)->capture_default_str();
  propCmd->add_option("--positions", props.positions)->capture_default_str();
  add_params(propCmd, props.params);

  CLI11_PARSE(app, argc, argv);

  try {
    const fs::path out(outDir);
    if (*convCmd) {
      const StudyReport r = run_convergence(conv);
      fmt::print("{:>5} {:>10} {:>10} {:>10} {:>10} {:>10}\n", "level", "h", "H1 bulk", "L2 bulk", "H1 surf", "L2 surf");
      for (const auto& row : r.convergenceRows) {
        fmt::print("{:>5} {:10.3e} {} {} {} {}\n", row.level, row.h, fmt_opt(row.solved, row.errors.h1Bulk),
                   fmt_opt(row.solved, row.errors.l2Bulk), fmt_opt(row.solved, row.errors.h1Surf),
                   fmt_opt(row.solved, row.errors.l2Surf));
        if (!row.solved) fmt::print(stderr, "level {}: {}\n", row.level, row.failure);
      }
      auto f = open_csv(out, "convergence.csv");
      write_convergence_csv(f, r.convergenceRows);
    } else if (*sweepCmd) {
      sweep.configs.clear();
      for (const auto& c : configs) sweep.configs.push_back(parse_stab_config(c));
      const StudyReport r = run_condition_sweep(sweep);
      for (const auto& c : configs) fmt::print("{:<12} max/min kappa = {:.3e}\n", c, kappa_spread(r.conditionRows, c));
      auto f = open_csv(out, "condition.csv");
      write_condition_csv(f, r.conditionRows);
    } else if (*scalingCmd) {
      const StudyReport r = run_condition_scaling(scaling);
      std::vector<double> h, k;
      for (const auto& row : r.scalingRows) {
        fmt::print("level {} h {:.3e} N {} kappa {:.4e}\n", row.level, row.h, row.dofs, row.kappa);
        h.push_back(row.h);
        k.push_back(row.kappa);
      }
      fmt::print("slope {:.3f}\n", loglog_slope(h, k));
      auto f = open_csv(out, "condition_scaling.csv");
      write_scaling_csv(f, r.scalingRows);
    } else if (*geoCmd) {
      const StudyReport r = run_geometry_check(geoLevels, geoN0);
      for (const auto& row : r.geometryRows) {
        fmt::print("level {} dist {:.3e} normal {:.3e} length {:.10f}\n", row.level, row.supDist, row.supNormalDev,
                   row.length);
      }
      auto f = open_csv(out, "geometry.csv");
      write_geometry_csv(f, r.geometryRows);
    } else if (*propCmd) {
      const StudyReport r = run_property_suite(props);
      for (const auto& row : r.propertyRows) {
        if (!row.delta) fmt::print("{:<40} {:.4e} {}\n", row.name, row.constant, row.pass ? "ok" : "FAIL");
      }
      auto f = open_csv(out, "properties.csv");
      write_properties_csv(f, r.propertyRows);
    }
  } catch (const ConfigurationError& e) {
    fmt::print(stderr, "configuration error: {}\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
  return 0;
}
