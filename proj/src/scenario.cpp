#include "porosplit/scenario.hpp"

#include <cmath>
#include <regex>

#include "porosplit/error.hpp"

namespace porosplit {

void MaterialParams::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(ErrorKind::InvalidMaterial, std::string(name) + " must be positive and finite");
    }
  };
  positive(biot_modulus, "M");
  // b = 0 is the decoupled limit: flow and mechanics no longer interact.
  if (!(biot_coefficient >= 0.0) || !std::isfinite(biot_coefficient)) {
    throw Error(ErrorKind::InvalidMaterial, "b must be non-negative and finite");
  }
  positive(mu, "mu");
  positive(lambda, "lambda");
  positive(bulk_density, "rho_b");
  const Eigen::Matrix2d& k = permeability;
  if (std::abs(k(0, 1) - k(1, 0)) > 1e-14 * k.norm()) {
    throw Error(ErrorKind::InvalidMaterial, "permeability must be symmetric");
  }
  if (!(k(0, 0) > 0.0) || !(k.determinant() > 0.0)) {
    throw Error(ErrorKind::InvalidMaterial, "permeability must be positive definite");
  }
}

double optimal_tuning(const MaterialParams& material) {
  return material.biot_coefficient * material.biot_coefficient / (2.0 * material.lambda);
}

double contraction_factor(const MaterialParams& material, double tuning) {
  const double lm = tuning * material.biot_modulus;
  return lm / (lm + 1.0);
}

LameParameters lame_from_engineering(double youngs_modulus, double poisson_ratio) {
  if (poisson_ratio >= 0.5 || poisson_ratio <= -1.0) {
    throw Error(ErrorKind::InvalidMaterial, "Poisson ratio must lie in (-1, 0.5)");
  }
  if (!(youngs_modulus > 0.0)) throw Error(ErrorKind::InvalidMaterial, "Young's modulus must be positive");
  const double e = youngs_modulus;
  const double nu = poisson_ratio;
  return {e / (2.0 * (1.0 + nu)), e * nu / ((1.0 - 2.0 * nu) * (1.0 + nu))};
}

double benchmark_traction(double t) {
  const double d = t - 0.5;
  return -2560.0 * t * t * d * d;
}

Mesh MeshSpec::build() const {
  if (kind == MeshKind::LShape) {
    if (level < 0) throw Error(ErrorKind::InvalidInput, "mesh level must be >= 0");
    return build_lshape_mesh(level);
  }
  if (nx < 1 || ny < 1) throw Error(ErrorKind::InvalidInput, "nx and ny must be >= 1");
  return build_rectangle_mesh(extent, nx, ny, side_tags);
}

void ScenarioConfig::validate() const {
  material.validate();
  if (!(end_time > 0.0) || !(time_step > 0.0)) {
    throw Error(ErrorKind::InvalidInput, "end time and time step must be positive");
  }
  const double ratio = end_time / time_step;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio)) {
    throw Error(ErrorKind::InvalidInput, "end time must be an integer multiple of the time step");
  }
  if (scheme == TimeScheme::Continuous && time_degree < 1) {
    throw Error(ErrorKind::InvalidOrder, "continuous scheme needs degree >= 1");
  }
  if (time_degree < 0) throw Error(ErrorKind::InvalidOrder, "time degree must be >= 0");
  if (space_degree < 0) throw Error(ErrorKind::InvalidOrder, "space degree must be >= 0");
  if (!(tolerances.fixed > 0.0) || !(tolerances.flow > 0.0) || !(tolerances.mechanics > 0.0)) {
    throw Error(ErrorKind::InvalidInput, "tolerances must be positive");
  }
  if (tolerances.max_fixed_iters < 2) throw Error(ErrorKind::InvalidInput, "max_fixed_iters must be >= 2");
  if (!(tuning.value > 0.0)) throw Error(ErrorKind::InvalidInput, "omega / L must be positive");
}

int ScenarioConfig::num_slabs() const { return static_cast<int>(std::lround(end_time / time_step)); }

double ScenarioConfig::tuning_parameter() const {
  return tuning.mode == Tuning::Mode::Omega ? tuning.value * optimal_tuning(material) : tuning.value;
}

ScalarField ScenarioConfig::source() const {
  if (loads.source_fn) return loads.source_fn;
  const double f = loads.source;
  return [f](const Point2&, double) { return f; };
}

VectorField ScenarioConfig::body_force() const {
  if (loads.body_force_fn) return loads.body_force_fn;
  const double gx = material.bulk_density * loads.gravity[0];
  const double gy = material.bulk_density * loads.gravity[1];
  return [gx, gy](const Point2&, double) { return std::array<double, 2>{gx, gy}; };
}

VectorField ScenarioConfig::traction() const {
  if (loads.traction_fn) return loads.traction_fn;
  switch (loads.traction) {
    case TractionProfile::Benchmark:
      return [](const Point2&, double t) { return std::array<double, 2>{0.0, benchmark_traction(t)}; };
    case TractionProfile::Constant: {
      const auto g = loads.traction_value;
      return [g](const Point2&, double) { return g; };
    }
    case TractionProfile::Zero:
      break;
  }
  return [](const Point2&, double) { return std::array<double, 2>{0.0, 0.0}; };
}

ScalarField ScenarioConfig::boundary_pressure() const {
  if (loads.boundary_pressure_fn) return loads.boundary_pressure_fn;
  const double p = loads.boundary_pressure;
  return [p](const Point2&, double) { return p; };
}

BoundarySpec benchmark_boundary() {
  BoundarySpec spec;
  spec[tags::kTractionTop] = {FlowCondition::Open, {false, false}, true};
  spec[tags::kTractionFree] = {FlowCondition::NoFlow, {false, false}, false};
  spec[tags::kSymmetryX] = {FlowCondition::NoFlow, {true, false}, false};
  spec[tags::kSymmetryY] = {FlowCondition::NoFlow, {false, true}, false};
  return spec;
}

ScenarioConfig benchmark_scenario(int level, double time_step, TimeScheme scheme, int time_degree, int space_degree,
                                  double omega) {
  ScenarioConfig config;
  config.mesh.kind = MeshKind::LShape;
  config.mesh.level = level;
  const LameParameters lame = lame_from_engineering(100.0, 0.35);
  config.material.biot_modulus = 100.0;
  config.material.biot_coefficient = 100.0;
  config.material.mu = lame.mu;
  config.material.lambda = lame.lambda;
  config.material.permeability = 0.1 * Eigen::Matrix2d::Identity();
  config.material.bulk_density = 1.0;
  config.end_time = 0.5;
  config.time_step = time_step;
  config.scheme = scheme;
  config.time_degree = time_degree;
  config.space_degree = space_degree;
  config.loads.traction = TractionProfile::Benchmark;
  config.boundary = benchmark_boundary();
  config.tuning = {Tuning::Mode::Omega, omega};
  const bool lowest = (scheme == TimeScheme::Discontinuous && time_degree == 0) ||
                      (scheme == TimeScheme::Continuous && time_degree == 1);
  config.tolerances.fixed = 1e-8;
  config.tolerances.flow = lowest ? 1e-14 : 1e-12;
  config.tolerances.mechanics = 1e-12;
  config.tolerances.max_fixed_iters = 500;
  return config;
}

std::string scheme_label(TimeScheme scheme, int degree) {
  return (scheme == TimeScheme::Continuous ? "cGP(" : "dG(") + std::to_string(degree) + ")";
}

std::pair<TimeScheme, int> parse_scheme_label(const std::string& label) {
  static const std::regex pattern(R"(^\s*(cGP|cgp|dG|dg)\s*\(?\s*(\d+)\s*\)?\s*$)");
  std::smatch m;
  if (!std::regex_match(label, m, pattern)) {
    throw Error(ErrorKind::InvalidInput, "cannot parse time scheme '" + label + "'");
  }
  const TimeScheme scheme = (m[1].str()[0] == 'c') ? TimeScheme::Continuous : TimeScheme::Discontinuous;
  const int degree = std::stoi(m[2].str());
  if (scheme == TimeScheme::Continuous && degree < 1) {
    throw Error(ErrorKind::InvalidOrder, "cGP needs degree >= 1");
  }
  return {scheme, degree};
}

}  // namespace porosplit
