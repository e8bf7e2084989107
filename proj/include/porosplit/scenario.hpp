#pragma once

#include <Eigen/Dense>
#include <array>
#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <utility>

#include "porosplit/assembly.hpp"
#include "porosplit/mesh.hpp"
#include "porosplit/time_basis.hpp"

namespace porosplit {

/// Physical coefficients of the Biot system. `permeability` is K/eta.
struct MaterialParams {
  double biot_modulus = 1.0;  // M
  double biot_coefficient = 1.0;  // b
  double mu = 1.0;
  double lambda = 1.0;
  Eigen::Matrix2d permeability = Eigen::Matrix2d::Identity();
  double bulk_density = 1.0;  // rho_b, multiplies gravity

  /// Throws InvalidMaterial unless M, mu, lambda, rho_b > 0, b >= 0 and K is SPD.
  void validate() const;
};

/// L* = b^2 / (2 lambda).
double optimal_tuning(const MaterialParams& material);

/// L M / (L M + 1).
double contraction_factor(const MaterialParams& material, double tuning);

struct LameParameters {
  double mu;
  double lambda;
};

LameParameters lame_from_engineering(double youngs_modulus, double poisson_ratio);

/// Traction load of the benchmark, h(t) = -2560 t^2 (t - 0.5)^2.
double benchmark_traction(double t);

enum class FlowCondition { NoFlow, Open };

/// What a boundary tag means for each subproblem.
struct BoundaryCondition {
  FlowCondition flow = FlowCondition::NoFlow;
  std::array<bool, 2> fixed{false, false};
  bool traction = false;

  bool operator==(const BoundaryCondition&) const = default;
};

using BoundarySpec = std::map<BoundaryTag, BoundaryCondition>;

enum class MeshKind { LShape, Rectangle };

struct MeshSpec {
  MeshKind kind = MeshKind::LShape;
  int level = 1;
  Rectangle extent;
  int nx = 1;
  int ny = 1;
  RectangleTags side_tags;

  Mesh build() const;
};

enum class TractionProfile { Zero, Benchmark, Constant };

/// Data terms. The scalar fields are what a scenario file can express; the
/// function slots, when set, replace them (manufactured solutions use this).
struct LoadSpec {
  double source = 0.0;
  std::array<double, 2> gravity{0.0, 0.0};
  TractionProfile traction = TractionProfile::Zero;
  std::array<double, 2> traction_value{0.0, 0.0};
  double boundary_pressure = 0.0;

  ScalarField source_fn;
  VectorField body_force_fn;
  VectorField traction_fn;
  ScalarField boundary_pressure_fn;
};

struct Tuning {
  enum class Mode { Omega, Explicit };
  Mode mode = Mode::Omega;
  double value = 1.0;
};

struct Tolerances {
  double fixed = 1e-8;
  double flow = 1e-14;
  double mechanics = 1e-12;
  int max_fixed_iters = 500;
};

enum class SolveMode { Split, Monolithic };

struct ScenarioConfig {
  MeshSpec mesh;
  MaterialParams material;
  double end_time = 0.5;
  double time_step = 0.01;
  TimeScheme scheme = TimeScheme::Discontinuous;
  int time_degree = 0;
  int space_degree = 0;
  LoadSpec loads;
  BoundarySpec boundary;
  Tuning tuning;
  Tolerances tolerances;
  SolveMode mode = SolveMode::Split;

  /// Throws InvalidInput / InvalidOrder / InvalidMaterial on violated invariants.
  void validate() const;
  int num_slabs() const;
  double tuning_parameter() const;

  ScalarField source() const;
  VectorField body_force() const;
  VectorField traction() const;
  ScalarField boundary_pressure() const;
};

/// The L-shaped consolidation benchmark at refinement level m.
ScenarioConfig benchmark_scenario(int level, double time_step, TimeScheme scheme, int time_degree, int space_degree,
                                  double omega);

/// Boundary conditions of the benchmark tags.
BoundarySpec benchmark_boundary();

std::string scheme_label(TimeScheme scheme, int degree);
/// Parses labels such as "dG0", "dG(1)", "cGP2".
std::pair<TimeScheme, int> parse_scheme_label(const std::string& label);

// Scenario files: sectioned key=value text. Unknown keys are rejected.
ScenarioConfig parse_scenario(std::istream& is);
ScenarioConfig read_scenario(const std::string& path);
void write_scenario(std::ostream& os, const ScenarioConfig& config);
/// Reference of every section and key accepted by parse_scenario.
std::string scenario_schema();

}  // namespace porosplit
