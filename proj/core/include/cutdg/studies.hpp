#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cutdg/forms.hpp"
#include "cutdg/mesh.hpp"
#include "cutdg/problems.hpp"
#include "cutdg/solver.hpp"

namespace cutdg {

/// [-1.1, 1.1]^2 around the unit circle.
Box default_box();

/// Structured mesh of refinement level k: n0 * 2^k cells per direction.
BackgroundMesh level_mesh(int level, int n0 = 8, const Box& box = default_box());

struct ConvergenceRow {
  int level = 0;
  double h = 0.0;
  ErrorReport errors;
  /// Empty at the first level and wherever a neighbour failed.
  std::optional<std::array<double, 4>> eoc;  // h1 bulk, l2 bulk, h1 surf, l2 surf
  bool solved = true;
  std::string failure;
  long iterations = 0;
  int dofs = 0;
};

struct ConditionRow {
  double delta = 0.0;
  double kappa = 0.0;
  double lambdaMin = 0.0;
  double lambdaMax = 0.0;
  std::string config;
  bool degenerate = false;
};

struct ScalingRow {
  int level = 0;
  double h = 0.0;
  double kappa = 0.0;
  double lambdaMin = 0.0;
  double lambdaMax = 0.0;
  int dofs = 0;
};

struct GeometryRow {
  int level = 0;
  double h = 0.0;
  double supDist = 0.0;
  double supNormalDev = 0.0;
  double length = 0.0;
};

struct PropertyRow {
  std::string name;
  double constant = 0.0;
  std::optional<double> delta;  ///< empty for sweep summaries
  bool pass = true;
};

struct StudyReport {
  std::vector<ConvergenceRow> convergenceRows;
  std::vector<ConditionRow> conditionRows;
  std::vector<ScalingRow> scalingRows;
  std::vector<GeometryRow> geometryRows;
  std::vector<PropertyRow> propertyRows;
};

/// kappa recorded for a singular configuration.
inline constexpr double kDegenerateKappa = 1e300;

struct ConvergenceOptions {
  int levels = 5;
  int n0 = 8;
  StabilizationParams params;
  bool ablateGhost = false;
  SolveOptions solve;
  double cBulk = 1.0;
  double cSurf = 1.0;
};

StudyReport run_convergence(const ConvergenceOptions& options);

/// Mean of the last two EOC entries of each norm (h1 bulk, l2 bulk, h1 surf,
/// l2 surf). Throws if fewer than two are available.
std::array<double, 4> final_eoc_means(const std::vector<ConvergenceRow>& rows);

enum class StabConfig { Full, NoSurface, NoBulk, None };

std::string to_string(StabConfig c);
StabConfig parse_stab_config(const std::string& name);
StabilizationParams apply_config(StabilizationParams p, StabConfig c);

/// Circle center for sweep position delta in [0, 1]: (delta - 1/2) times one
/// cell diagonal step (dx, dx), so delta = 0 and delta = 1 differ by a mesh
/// translation.
Vec2 sweep_center(const BackgroundMesh& mesh, int n, double delta);

struct SweepOptions {
  int level = 1;
  int n0 = 8;
  int positions = 101;
  std::vector<StabConfig> configs{StabConfig::Full};
  StabilizationParams params;
  double surfaceExponent = 0.25;
  ConditionOptions condition;
};

StudyReport run_condition_sweep(const SweepOptions& options);

struct ScalingOptions {
  int levels = 4;
  int n0 = 8;
  StabilizationParams params;
  double surfaceExponent = 0.25;
  ConditionOptions condition;
};

StudyReport run_condition_scaling(const ScalingOptions& options);

/// max kappa / min kappa over the rows of one configuration.
double kappa_spread(const std::vector<ConditionRow>& rows, const std::string& config);

StudyReport run_geometry_check(int levels, int n0 = 8, int samples = 8);

struct PropertyOptions {
  int level = 1;
  int n0 = 8;
  int positions = 21;
  StabilizationParams params;
  /// Tolerated max/min ratio of each constant across the sweep.
  double stableFactor = 2.0;
  /// Required max/min ratio when a ghost penalty is switched off.
  double ablationFactor = 1e2;
};

StudyReport run_property_suite(const PropertyOptions& options);

/// Deterministic CSV output, one header line then one line per row.
void write_convergence_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows);
void write_condition_csv(std::ostream& out, const std::vector<ConditionRow>& rows);
void write_scaling_csv(std::ostream& out, const std::vector<ScalingRow>& rows);
void write_geometry_csv(std::ostream& out, const std::vector<GeometryRow>& rows);
void write_properties_csv(std::ostream& out, const std::vector<PropertyRow>& rows);

}  // namespace cutdg
