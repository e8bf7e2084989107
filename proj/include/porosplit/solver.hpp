#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <memory>
#include <set>
#include <string_view>
#include <utility>
#include <vector>

#include "porosplit/assembly.hpp"
#include "porosplit/error.hpp"
#include "porosplit/scenario.hpp"
#include "porosplit/spaces.hpp"
#include "porosplit/time_basis.hpp"

namespace porosplit {

/// Coefficients of one slab at its time nodes 0..r, as full-length dof
/// vectors. For the continuous scheme node 0 holds the previous slab's end
/// value; for the discontinuous scheme every node is an unknown.
struct SlabState {
  int slab = 0;
  std::vector<Eigen::VectorXd> p;
  std::vector<Eigen::VectorXd> q;
  std::vector<Eigen::VectorXd> u;
};

/// Blown-up marks a run whose increments became non-finite or exceeded
/// 1e30 before the iteration cap.
enum class Termination { Converged, MaxIters, BlownUp };
std::string_view to_string(Termination t);

struct IterationReport {
  int slab = 0;
  int iterations = 0;
  // Entry k-1 belongs to iteration k: l2 norm of the stacked difference of
  // the unknown time-node coefficients between iterates k and k-1.
  std::vector<double> increment_p;
  std::vector<double> increment_q;
  std::vector<double> increment_u;
  // Pressure increments measured through the storage tableau and the
  // pressure mass matrix, the quantity the contraction theory controls.
  std::vector<double> increment_p_weighted;
  Termination termination = Termination::Converged;
};

struct FieldSnapshot {
  double time = 0.0;
  Eigen::VectorXd p;
  Eigen::VectorXd q;
  Eigen::VectorXd u;
};

struct RunResult {
  std::vector<SlabState> slabs;
  std::vector<IterationReport> reports;
  /// End-of-slab values at t_n (left limit for the discontinuous scheme).
  std::vector<FieldSnapshot> snapshots;

  long total_iterations() const;
  int max_slab_iterations() const;
};

/// Fixed-stress iteration hit its cap or blew up.
class DivergenceError : public Error {
 public:
  DivergenceError(IterationReport report, long iterations_before);

  int slab() const { return report_.slab; }
  const IterationReport& report() const { return report_; }
  /// Iterations spent on the slabs that did converge before this one.
  long iterations_before() const { return iterations_before_; }

 private:
  IterationReport report_;
  long iterations_before_;
};

/// Data a slab receives from its predecessor: end values at t_{n-1}.
struct SlabInputs {
  int slab = 1;
  double start_time = 0.0;
  Eigen::VectorXd p;
  Eigen::VectorXd q;
  Eigen::VectorXd u;
};

/// Right-hand sides at every time node of one slab (full-length vectors).
struct SlabLoads {
  std::vector<Eigen::VectorXd> source;     // <f(t_i), w>
  std::vector<Eigen::VectorXd> darcy;      // -<p_D(t_i), v.n> on open facets
  std::vector<Eigen::VectorXd> mechanics;  // traction + body force at t_i
};

struct FlowIterate {
  std::vector<Eigen::VectorXd> p;
  std::vector<Eigen::VectorXd> q;
};

/// Discretized Biot problem of one scenario: mesh, spaces, operators and
/// factorizations (built once; the time step is uniform). All methods are
/// const but the monolithic factorization is built lazily, so one instance
/// must not be shared across threads.
class BiotSolver {
 public:
  explicit BiotSolver(const ScenarioConfig& config);
  ~BiotSolver();
  BiotSolver(const BiotSolver&) = delete;
  BiotSolver& operator=(const BiotSolver&) = delete;

  const ScenarioConfig& config() const { return config_; }
  const Mesh& mesh() const { return *mesh_; }
  const Spaces& spaces() const { return spaces_; }
  const TimeSlabBasis& basis() const { return basis_; }
  double tuning() const { return tuning_; }
  double time_step() const { return config_.time_step; }

  SlabInputs initial_inputs() const;
  SlabInputs next_inputs(const SlabState& state) const;
  SlabLoads slab_loads(double start_time) const;

  /// sum_j phi_j(1) X^j.
  Eigen::VectorXd end_value(const std::vector<Eigen::VectorXd>& coeffs) const;

  FlowIterate flow_half_step(const SlabInputs& inputs, const SlabLoads& loads,
                             const std::vector<Eigen::VectorXd>& p_prev,
                             const std::vector<Eigen::VectorXd>& u_prev) const;
  std::vector<Eigen::VectorXd> mechanics_half_step(const SlabInputs& inputs, const SlabLoads& loads,
                                                   const std::vector<Eigen::VectorXd>& p) const;
  /// Throws DivergenceError (carrying the report) on MaxIters / BlownUp.
  std::pair<SlabState, IterationReport> fixed_stress_slab(const SlabInputs& inputs, const SlabLoads& loads) const;
  SlabState monolithic_slab(const SlabInputs& inputs, const SlabLoads& loads) const;

  RunResult run(SolveMode mode) const;

 private:
  struct Operators;
  struct Factorizations;

  ScenarioConfig config_;
  std::shared_ptr<const Mesh> mesh_;
  Spaces spaces_;
  TimeSlabBasis basis_;
  double tuning_;
  std::set<BoundaryTag> traction_tags_;
  std::set<BoundaryTag> open_tags_;
  std::unique_ptr<Operators> ops_;
  std::unique_ptr<Factorizations> factors_;
};

/// Builds the spaces a scenario asks for; throws InvalidBoundarySpec when
/// the boundary spec and the mesh tags disagree.
Spaces build_spaces(const std::shared_ptr<const Mesh>& mesh, const ScenarioConfig& config);

RunResult run_simulation(const ScenarioConfig& config, SolveMode mode);

struct ContractionEstimate {
  /// ratios[k] = increment[k+1] / increment[k].
  std::vector<double> ratios;
  /// Geometric mean of ratios[1..], skipping the first ratio, which compares
  /// against the artificial initial iterate.
  double geometric_mean = 0.0;
};

/// Raw pressure-increment ratios. Throws InsufficientData below 3 iterations.
ContractionEstimate contraction_estimate(const IterationReport& report);
/// Same for the storage-weighted pressure increments.
ContractionEstimate weighted_contraction_estimate(const IterationReport& report);
ContractionEstimate contraction_estimate(const std::vector<double>& increments);

struct FieldNorms {
  double p = 0.0;
  double q = 0.0;
  double u = 0.0;
};

struct ErrorNorms {
  FieldNorms endpoint;      // L2(Omega) of the difference at t_n
  FieldNorms coefficients;  // l2 of the stacked coefficient difference
  FieldNorms time_l2;       // L2(I_n; L2(Omega)), slab Gauss rule
};

/// Mass-matrix norms of the three fields.
class FieldNormOperators {
 public:
  explicit FieldNormOperators(const Spaces& spaces);
  double pressure(const Eigen::VectorXd& p) const;
  double flux(const Eigen::VectorXd& q) const;
  double displacement(const Eigen::VectorXd& u) const;

 private:
  SparseOperator mp_;
  SparseOperator mq_;
  SparseOperator mu_;
};

/// Throws InvalidInput when the two states do not share a layout.
ErrorNorms error_norms(const SlabState& a, const SlabState& b, const Spaces& spaces, const TimeSlabBasis& basis,
                       double time_step);
ErrorNorms error_norms(const SlabState& a, const SlabState& b, const FieldNormOperators& norms,
                       const TimeSlabBasis& basis, double time_step);

}  // namespace porosplit
