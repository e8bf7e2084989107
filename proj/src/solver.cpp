#include "porosplit/solver.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <spdlog/spdlog.h>
#include <sstream>

namespace porosplit {

namespace {

using Vec = Eigen::VectorXd;
using Triplets = std::vector<Eigen::Triplet<double>>;
using LU = Eigen::SparseLU<SparseOperator, Eigen::COLAMDOrdering<int>>;

constexpr double kBlowUp = 1e30;

void add_block(Triplets& t, const SparseOperator& m, int row0, int col0, double scale) {
  if (scale == 0.0) return;
  for (int k = 0; k < m.outerSize(); ++k) {
    for (SparseOperator::InnerIterator it(m, k); it; ++it) {
      t.emplace_back(row0 + static_cast<int>(it.row()), col0 + static_cast<int>(it.col()), scale * it.value());
    }
  }
}

SparseOperator from_triplets(int n, const Triplets& t) {
  SparseOperator a(n, n);
  a.setFromTriplets(t.begin(), t.end());
  a.makeCompressed();
  return a;
}

double stacked_difference(const std::vector<Vec>& a, const std::vector<Vec>& b, std::size_t first) {
  double sum = 0.0;
  for (std::size_t j = first; j < a.size(); ++j) sum += (a[j] - b[j]).squaredNorm();
  return std::sqrt(sum);
}

void factorize(LU& lu, const SparseOperator& a, const char* what) {
  lu.analyzePattern(a);
  lu.factorize(a);
  if (lu.info() != Eigen::Success) {
    throw Error(ErrorKind::SingularSystem, std::string(what) + " system is singular: " + lu.lastErrorMessage());
  }
}

/// Direct solve followed by at most two refinement sweeps when the relative
/// residual exceeds `tol`. A residual that stays large means the
/// factorization was numerically singular.
template <typename Solver>
Vec solve_checked(const Solver& solver, const SparseOperator& a, const Vec& rhs, double tol, const char* what) {
  const double bnorm = rhs.norm();
  if (bnorm == 0.0) return Vec::Zero(rhs.size());
  Vec x = solver.solve(rhs);
  double rel = (rhs - a * x).norm() / bnorm;
  for (int sweep = 0; sweep < 2 && rel > tol && std::isfinite(rel); ++sweep) {
    x += solver.solve(Vec(rhs - a * x));
    rel = (rhs - a * x).norm() / bnorm;
  }
  if (!std::isfinite(rel) || rel > 1e-6) {
    throw Error(ErrorKind::SingularSystem, std::string(what) + " solve failed, relative residual " + std::to_string(rel));
  }
  if (rel > tol) spdlog::debug("{} solve: relative residual {:.3e} above tolerance {:.1e}", what, rel, tol);
  return x;
}

std::string describe_increments(const IterationReport& r) {
  if (r.increment_p.empty()) return "no iterations";
  std::ostringstream os;
  os << "last increments p=" << r.increment_p.back() << " q=" << r.increment_q.back()
     << " u=" << r.increment_u.back();
  return os.str();
}

}  // namespace

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::Converged:
      return "Converged";
    case Termination::MaxIters:
      return "MaxIters";
    case Termination::BlownUp:
      return "BlownUp";
  }
  return "?";
}

long RunResult::total_iterations() const {
  long total = 0;
  for (const auto& r : reports) total += r.iterations;
  return total;
}

int RunResult::max_slab_iterations() const {
  int m = 0;
  for (const auto& r : reports) m = std::max(m, r.iterations);
  return m;
}

DivergenceError::DivergenceError(IterationReport report, long iterations_before)
    : Error(ErrorKind::Divergence, "slab " + std::to_string(report.slab) + ": fixed-stress iteration " +
                                       std::string(to_string(report.termination)) + " after " +
                                       std::to_string(report.iterations) + " iterations, " +
                                       describe_increments(report)),
      report_(std::move(report)),
      iterations_before_(iterations_before) {}

Spaces build_spaces(const std::shared_ptr<const Mesh>& mesh, const ScenarioConfig& config) {
  const auto present = mesh->boundary_tags();
  for (const auto& tag : present) {
    if (!config.boundary.count(tag)) {
      throw Error(ErrorKind::InvalidBoundarySpec, "boundary tag '" + tag.label + "' has no boundary condition");
    }
  }
  std::set<BoundaryTag> essential_flux;
  DisplacementConstraints fixed;
  for (const auto& [tag, bc] : config.boundary) {
    if (std::find(present.begin(), present.end(), tag) == present.end()) {
      throw Error(ErrorKind::InvalidBoundarySpec, "boundary tag '" + tag.label + "' does not occur on the mesh");
    }
    if (bc.flow == FlowCondition::NoFlow) essential_flux.insert(tag);
    if (bc.fixed[0] || bc.fixed[1]) fixed[tag] = bc.fixed;
  }
  const int s = config.space_degree;
  return Spaces{build_pressure_space(mesh, s), build_flux_space(mesh, s, essential_flux),
                build_displacement_space(mesh, s + 1, fixed)};
}

// Operators restricted to the free dofs.
struct BiotSolver::Operators {
  SparseOperator mp;  // pressure mass
  SparseOperator aq;  // flux mass with K^{-1}
  SparseOperator b;   // <div v, w>, pressure x flux
  SparseOperator bt;
  SparseOperator au;  // elasticity
  SparseOperator c;   // b <p, div z>, displacement x pressure
  SparseOperator ct;
};

struct BiotSolver::Factorizations {
  SparseOperator flow_matrix;
  LU flow;
  Eigen::SimplicialLDLT<SparseOperator> mechanics;
  SparseOperator monolithic_matrix;
  std::unique_ptr<LU> monolithic;
};

BiotSolver::BiotSolver(const ScenarioConfig& config)
    : config_((config.validate(), config)),
      mesh_(std::make_shared<const Mesh>(config.mesh.build())),
      spaces_(build_spaces(mesh_, config)),
      basis_(build_time_basis(config.scheme, config.time_degree)),
      tuning_(config.tuning_parameter()),
      ops_(std::make_unique<Operators>()),
      factors_(std::make_unique<Factorizations>()) {
  for (const auto& [tag, bc] : config_.boundary) {
    if (bc.traction) traction_tags_.insert(tag);
    if (bc.flow == FlowCondition::Open) open_tags_.insert(tag);
  }
  const auto& mat = config_.material;
  const DofMap& w = spaces_.pressure;
  const DofMap& v = spaces_.flux;
  const DofMap& h = spaces_.displacement;
  ops_->mp = restrict_operator(assemble_pressure_mass(w), w, w);
  ops_->aq = restrict_operator(assemble_flux_mass(v, mat.permeability), v, v);
  ops_->b = restrict_operator(assemble_div(v, w), w, v);
  ops_->bt = ops_->b.transpose();
  ops_->au = restrict_operator(assemble_elasticity(h, mat.mu, mat.lambda), h, h);
  ops_->c = restrict_operator(assemble_coupling(w, h, mat.biot_coefficient), h, w);
  ops_->ct = ops_->c.transpose();

  // Flow block system over the unknown time nodes, node-major [P_i, Q_i].
  // Darcy rows are scaled by tau beta_i to balance the two row families.
  const int np = w.num_free();
  const int nq = v.num_free();
  const int blk = np + nq;
  const int first = basis_.first_unknown();
  const int nt = basis_.num_unknown_nodes();
  const auto& s = basis_.storage_tableau();
  const double tau = config_.time_step;
  const double storage = 1.0 / mat.biot_modulus + tuning_;
  Triplets t;
  for (int a = 0; a < nt; ++a) {
    const int i = first + a;
    const double tb = tau * basis_.beta_ref(i);
    for (int bb = 0; bb < nt; ++bb) add_block(t, ops_->mp, a * blk, bb * blk, storage * s(i, first + bb));
    add_block(t, ops_->b, a * blk, a * blk + np, tb);
    add_block(t, ops_->aq, a * blk + np, a * blk + np, tb);
    add_block(t, ops_->bt, a * blk + np, a * blk, -tb);
  }
  factors_->flow_matrix = from_triplets(nt * blk, t);
  factorize(factors_->flow, factors_->flow_matrix, "flow");

  factors_->mechanics.compute(ops_->au);
  if (factors_->mechanics.info() != Eigen::Success) {
    throw Error(ErrorKind::SingularSystem, "elasticity system is singular");
  }
  const Vec d = factors_->mechanics.vectorD();
  if (d.size() > 0) {
    const double dmax = d.cwiseAbs().maxCoeff();
    if (!(d.minCoeff() > 1e-12 * dmax)) {
      throw Error(ErrorKind::SingularSystem, "elasticity system is singular: displacement constraints admit rigid motions");
    }
  }
  spdlog::debug("discretization: {} cells, {} pressure / {} flux / {} displacement free dofs, {}, L={}", mesh_->num_cells(),
                np, nq, h.num_free(), basis_.name(), tuning_);
}

BiotSolver::~BiotSolver() = default;

SlabInputs BiotSolver::initial_inputs() const {
  SlabInputs in;
  in.slab = 1;
  in.start_time = 0.0;
  in.p = Vec::Zero(spaces_.pressure.num_dofs());
  in.q = Vec::Zero(spaces_.flux.num_dofs());
  in.u = Vec::Zero(spaces_.displacement.num_dofs());
  return in;
}

Eigen::VectorXd BiotSolver::end_value(const std::vector<Eigen::VectorXd>& coeffs) const {
  const Vec phi1 = basis_.right_end_values();
  Vec out = Vec::Zero(coeffs.front().size());
  for (std::size_t j = 0; j < coeffs.size(); ++j) out += phi1(static_cast<int>(j)) * coeffs[j];
  return out;
}

SlabInputs BiotSolver::next_inputs(const SlabState& state) const {
  SlabInputs in;
  in.slab = state.slab + 1;
  in.start_time = state.slab * config_.time_step;
  in.p = end_value(state.p);
  in.q = end_value(state.q);
  in.u = end_value(state.u);
  return in;
}

SlabLoads BiotSolver::slab_loads(double start_time) const {
  const auto source = config_.source();
  const auto force = config_.body_force();
  const auto traction = config_.traction();
  const auto pd = config_.boundary_pressure();
  SlabLoads loads;
  for (int i = 0; i < basis_.num_nodes(); ++i) {
    const double t = start_time + config_.time_step * basis_.nodes[i];
    loads.source.push_back(assemble_pressure_source(spaces_.pressure, source, t));
    loads.darcy.push_back(open_tags_.empty() ? Vec::Zero(spaces_.flux.num_dofs())
                                             : assemble_pressure_boundary(spaces_.flux, open_tags_, pd, t));
    Vec mech = assemble_body_force(spaces_.displacement, force, t);
    if (!traction_tags_.empty()) mech += assemble_traction(spaces_.displacement, traction_tags_, traction, t);
    loads.mechanics.push_back(std::move(mech));
  }
  return loads;
}

FlowIterate BiotSolver::flow_half_step(const SlabInputs& inputs, const SlabLoads& loads,
                                       const std::vector<Eigen::VectorXd>& p_prev,
                                       const std::vector<Eigen::VectorXd>& u_prev) const {
  const DofMap& w = spaces_.pressure;
  const DofMap& v = spaces_.flux;
  const DofMap& h = spaces_.displacement;
  const int nodes = basis_.num_nodes();
  if (static_cast<int>(p_prev.size()) != nodes || static_cast<int>(u_prev.size()) != nodes) {
    throw Error(ErrorKind::InvalidInput, "iterate does not match the time basis");
  }
  const int np = w.num_free();
  const int nq = v.num_free();
  const int blk = np + nq;
  const int first = basis_.first_unknown();
  const int nt = basis_.num_unknown_nodes();
  const auto& s = basis_.storage_tableau();
  const double tau = config_.time_step;
  const double inv_m = 1.0 / config_.material.biot_modulus;

  // Per-node products with the previous iterate; node 0 of the continuous
  // scheme is the known start value.
  std::vector<Vec> mp_p(nodes);
  std::vector<Vec> ct_u(nodes);
  for (int j = 0; j < nodes; ++j) {
    const bool known = j < first;
    mp_p[j] = ops_->mp * w.restrict_to_free(known ? inputs.p : p_prev[j]);
    ct_u[j] = ops_->ct * h.restrict_to_free(known ? inputs.u : u_prev[j]);
  }
  Vec trace;
  if (basis_.scheme == TimeScheme::Discontinuous) {
    trace = inv_m * (ops_->mp * w.restrict_to_free(inputs.p)) + ops_->ct * h.restrict_to_free(inputs.u);
  }

  Vec rhs = Vec::Zero(nt * blk);
  for (int a = 0; a < nt; ++a) {
    const int i = first + a;
    const double tb = tau * basis_.beta_ref(i);
    auto rp = rhs.segment(a * blk, np);
    rp = tb * w.restrict_to_free(loads.source[i]);
    for (int j = 0; j < nodes; ++j) {
      if (j < first) {
        rp -= s(i, j) * inv_m * mp_p[j];
      } else {
        rp += s(i, j) * tuning_ * mp_p[j];
      }
      rp -= s(i, j) * ct_u[j];
    }
    if (trace.size() > 0) rp += basis_.gamma(i) * trace;
    rhs.segment(a * blk + np, nq) = tb * v.restrict_to_free(loads.darcy[i]);
  }

  const Vec x = solve_checked(factors_->flow, factors_->flow_matrix, rhs, config_.tolerances.flow, "flow");
  FlowIterate out;
  out.p.resize(nodes);
  out.q.resize(nodes);
  for (int j = 0; j < first; ++j) {
    out.p[j] = inputs.p;
    out.q[j] = inputs.q;
  }
  for (int a = 0; a < nt; ++a) {
    out.p[first + a] = w.extend_from_free(x.segment(a * blk, np));
    out.q[first + a] = v.extend_from_free(x.segment(a * blk + np, nq));
  }
  return out;
}

std::vector<Eigen::VectorXd> BiotSolver::mechanics_half_step(const SlabInputs& inputs, const SlabLoads& loads,
                                                             const std::vector<Eigen::VectorXd>& p) const {
  const DofMap& w = spaces_.pressure;
  const DofMap& h = spaces_.displacement;
  const int nodes = basis_.num_nodes();
  const int first = basis_.first_unknown();
  if (static_cast<int>(p.size()) != nodes) throw Error(ErrorKind::InvalidInput, "pressure does not match the time basis");
  std::vector<Vec> u(nodes);
  for (int j = 0; j < first; ++j) u[j] = inputs.u;
  for (int i = first; i < nodes; ++i) {
    const Vec rhs = ops_->c * w.restrict_to_free(p[i]) + h.restrict_to_free(loads.mechanics[i]);
    u[i] = h.extend_from_free(
        solve_checked(factors_->mechanics, ops_->au, rhs, config_.tolerances.mechanics, "mechanics"));
  }
  return u;
}

std::pair<SlabState, IterationReport> BiotSolver::fixed_stress_slab(const SlabInputs& inputs,
                                                                     const SlabLoads& loads) const {
  const int nodes = basis_.num_nodes();
  const std::size_t first = static_cast<std::size_t>(basis_.first_unknown());
  const auto& s = basis_.storage_tableau();
  const Tolerances& tol = config_.tolerances;

  // Initial iterate: the previous end state held constant over the slab.
  std::vector<Vec> p(nodes, inputs.p);
  std::vector<Vec> q(nodes, inputs.q);
  std::vector<Vec> u(nodes, inputs.u);

  IterationReport report;
  report.slab = inputs.slab;
  for (int k = 1; k <= tol.max_fixed_iters; ++k) {
    FlowIterate flow = flow_half_step(inputs, loads, p, u);
    std::vector<Vec> u_next = mechanics_half_step(inputs, loads, flow.p);

    const double dp = stacked_difference(flow.p, p, first);
    const double dq = stacked_difference(flow.q, q, first);
    const double du = stacked_difference(u_next, u, first);
    double weighted = 0.0;
    for (int i = static_cast<int>(first); i < nodes; ++i) {
      Vec sp = Vec::Zero(inputs.p.size());
      for (int j = static_cast<int>(first); j < nodes; ++j) sp += s(i, j) * (flow.p[j] - p[j]);
      const Vec free = spaces_.pressure.restrict_to_free(sp);
      weighted += free.dot(ops_->mp * free) / basis_.beta_ref(i);
    }
    report.increment_p.push_back(dp);
    report.increment_q.push_back(dq);
    report.increment_u.push_back(du);
    report.increment_p_weighted.push_back(std::sqrt(std::max(weighted, 0.0)));
    report.iterations = k;

    p = std::move(flow.p);
    q = std::move(flow.q);
    u = std::move(u_next);

    const double worst = std::max({dp, dq, du});
    if (!std::isfinite(worst) || worst > kBlowUp) {
      report.termination = Termination::BlownUp;
      throw DivergenceError(std::move(report), 0);
    }
    if (k >= 2 && dp < tol.fixed && dq < tol.fixed && du < tol.fixed) {
      report.termination = Termination::Converged;
      return {SlabState{inputs.slab, std::move(p), std::move(q), std::move(u)}, std::move(report)};
    }
  }
  report.termination = Termination::MaxIters;
  throw DivergenceError(std::move(report), 0);
}

SlabState BiotSolver::monolithic_slab(const SlabInputs& inputs, const SlabLoads& loads) const {
  const DofMap& w = spaces_.pressure;
  const DofMap& v = spaces_.flux;
  const DofMap& h = spaces_.displacement;
  const int np = w.num_free();
  const int nq = v.num_free();
  const int nu = h.num_free();
  const int blk = np + nq + nu;
  const int nodes = basis_.num_nodes();
  const int first = basis_.first_unknown();
  const int nt = basis_.num_unknown_nodes();
  const auto& s = basis_.storage_tableau();
  const double tau = config_.time_step;
  const double inv_m = 1.0 / config_.material.biot_modulus;

  if (!factors_->monolithic) {
    Triplets t;
    for (int a = 0; a < nt; ++a) {
      const int i = first + a;
      const double tb = tau * basis_.beta_ref(i);
      const int rp = a * blk;
      const int rq = rp + np;
      const int ru = rq + nq;
      for (int bb = 0; bb < nt; ++bb) {
        const double sij = s(i, first + bb);
        add_block(t, ops_->mp, rp, bb * blk, inv_m * sij);
        add_block(t, ops_->ct, rp, bb * blk + np + nq, sij);
      }
      add_block(t, ops_->b, rp, rq, tb);
      add_block(t, ops_->aq, rq, rq, tb);
      add_block(t, ops_->bt, rq, rp, -tb);
      add_block(t, ops_->au, ru, ru, 1.0);
      add_block(t, ops_->c, ru, rp, -1.0);
    }
    factors_->monolithic_matrix = from_triplets(nt * blk, t);
    auto lu = std::make_unique<LU>();
    factorize(*lu, factors_->monolithic_matrix, "monolithic");
    factors_->monolithic = std::move(lu);
  }

  const Vec p0 = w.restrict_to_free(inputs.p);
  const Vec u0 = h.restrict_to_free(inputs.u);
  const Vec known = inv_m * (ops_->mp * p0) + ops_->ct * u0;
  Vec rhs = Vec::Zero(nt * blk);
  for (int a = 0; a < nt; ++a) {
    const int i = first + a;
    const double tb = tau * basis_.beta_ref(i);
    auto rp = rhs.segment(a * blk, np);
    rp = tb * w.restrict_to_free(loads.source[i]);
    for (int j = 0; j < first; ++j) rp -= s(i, j) * known;
    if (basis_.scheme == TimeScheme::Discontinuous) rp += basis_.gamma(i) * known;
    rhs.segment(a * blk + np, nq) = tb * v.restrict_to_free(loads.darcy[i]);
    rhs.segment(a * blk + np + nq, nu) = h.restrict_to_free(loads.mechanics[i]);
  }
  // The monolithic system is the oracle, so it is held to the tighter of the
  // two solver tolerances.
  const double tol = std::min(config_.tolerances.flow, config_.tolerances.mechanics);
  const Vec x = solve_checked(*factors_->monolithic, factors_->monolithic_matrix, rhs, tol, "monolithic");

  SlabState state;
  state.slab = inputs.slab;
  state.p.resize(nodes);
  state.q.resize(nodes);
  state.u.resize(nodes);
  for (int j = 0; j < first; ++j) {
    state.p[j] = inputs.p;
    state.q[j] = inputs.q;
    state.u[j] = inputs.u;
  }
  for (int a = 0; a < nt; ++a) {
    state.p[first + a] = w.extend_from_free(x.segment(a * blk, np));
    state.q[first + a] = v.extend_from_free(x.segment(a * blk + np, nq));
    state.u[first + a] = h.extend_from_free(x.segment(a * blk + np + nq, nu));
  }
  return state;
}

RunResult BiotSolver::run(SolveMode mode) const {
  RunResult result;
  const int slabs = config_.num_slabs();
  result.slabs.reserve(slabs);
  result.reports.reserve(slabs);
  SlabInputs inputs = initial_inputs();
  for (int n = 1; n <= slabs; ++n) {
    inputs.slab = n;
    inputs.start_time = (n - 1) * config_.time_step;
    const SlabLoads loads = slab_loads(inputs.start_time);
    if (mode == SolveMode::Split) {
      try {
        auto [state, report] = fixed_stress_slab(inputs, loads);
        spdlog::debug("slab {}: {} iterations", n, report.iterations);
        result.slabs.push_back(std::move(state));
        result.reports.push_back(std::move(report));
      } catch (const DivergenceError& e) {
        throw DivergenceError(e.report(), result.total_iterations());
      }
    } else {
      result.slabs.push_back(monolithic_slab(inputs, loads));
      IterationReport report;
      report.slab = n;
      result.reports.push_back(std::move(report));
    }
    const SlabState& state = result.slabs.back();
    inputs = next_inputs(state);
    result.snapshots.push_back(FieldSnapshot{n * config_.time_step, inputs.p, inputs.q, inputs.u});
  }
  return result;
}

RunResult run_simulation(const ScenarioConfig& config, SolveMode mode) { return BiotSolver(config).run(mode); }

ContractionEstimate contraction_estimate(const std::vector<double>& increments) {
  if (increments.size() < 3) {
    throw Error(ErrorKind::InsufficientData, "contraction estimate needs at least 3 iterations, got " +
                                                 std::to_string(increments.size()));
  }
  ContractionEstimate est;
  for (std::size_t k = 0; k + 1 < increments.size(); ++k) {
    est.ratios.push_back(increments[k] > 0.0 ? increments[k + 1] / increments[k] : 0.0);
  }
  double log_sum = 0.0;
  for (std::size_t k = 1; k < est.ratios.size(); ++k) {
    if (est.ratios[k] <= 0.0) return est;  // geometric mean stays 0
    log_sum += std::log(est.ratios[k]);
  }
  est.geometric_mean = std::exp(log_sum / static_cast<double>(est.ratios.size() - 1));
  return est;
}

ContractionEstimate contraction_estimate(const IterationReport& report) {
  return contraction_estimate(report.increment_p);
}

ContractionEstimate weighted_contraction_estimate(const IterationReport& report) {
  return contraction_estimate(report.increment_p_weighted);
}

FieldNormOperators::FieldNormOperators(const Spaces& spaces)
    : mp_(assemble_pressure_mass(spaces.pressure)),
      mq_(assemble_flux_mass(spaces.flux, Eigen::Matrix2d::Identity())),
      mu_(assemble_displacement_mass(spaces.displacement)) {}

namespace {
double mass_norm(const SparseOperator& m, const Vec& x) {
  if (x.size() != m.rows()) throw Error(ErrorKind::InvalidInput, "vector does not match the space");
  return std::sqrt(std::max(0.0, x.dot(m * x)));
}
}  // namespace

double FieldNormOperators::pressure(const Eigen::VectorXd& p) const { return mass_norm(mp_, p); }
double FieldNormOperators::flux(const Eigen::VectorXd& q) const { return mass_norm(mq_, q); }
double FieldNormOperators::displacement(const Eigen::VectorXd& u) const { return mass_norm(mu_, u); }

ErrorNorms error_norms(const SlabState& a, const SlabState& b, const FieldNormOperators& norms,
                       const TimeSlabBasis& basis, double time_step) {
  const std::size_t nodes = static_cast<std::size_t>(basis.num_nodes());
  auto check = [&](const std::vector<Vec>& x, const std::vector<Vec>& y) {
    if (x.size() != nodes || y.size() != nodes) throw Error(ErrorKind::InvalidInput, "state does not match the time basis");
    for (std::size_t j = 0; j < nodes; ++j) {
      if (x[j].size() != y[j].size()) throw Error(ErrorKind::InvalidInput, "states have different dof layouts");
    }
  };
  check(a.p, b.p);
  check(a.q, b.q);
  check(a.u, b.u);

  auto combine = [&](const std::vector<Vec>& x, const std::vector<Vec>& y, auto weight) {
    Vec out = Vec::Zero(x.front().size());
    for (std::size_t j = 0; j < nodes; ++j) out += weight(static_cast<int>(j)) * (x[j] - y[j]);
    return out;
  };
  const Vec phi1 = basis.right_end_values();
  auto at_end = [&](int j) { return phi1(j); };

  ErrorNorms e;
  e.endpoint.p = norms.pressure(combine(a.p, b.p, at_end));
  e.endpoint.q = norms.flux(combine(a.q, b.q, at_end));
  e.endpoint.u = norms.displacement(combine(a.u, b.u, at_end));
  e.coefficients.p = stacked_difference(a.p, b.p, 0);
  e.coefficients.q = stacked_difference(a.q, b.q, 0);
  e.coefficients.u = stacked_difference(a.u, b.u, 0);

  // Differences are degree r in time, so r+1 Gauss points integrate the
  // squared norm exactly.
  const auto rule = gauss_nodes(basis.num_nodes());
  FieldNorms sq;
  for (std::size_t g = 0; g < rule.nodes.size(); ++g) {
    auto at = [&](int j) { return basis.phi(j, rule.nodes[g]); };
    const double w = time_step * rule.weights[g];
    sq.p += w * std::pow(norms.pressure(combine(a.p, b.p, at)), 2);
    sq.q += w * std::pow(norms.flux(combine(a.q, b.q, at)), 2);
    sq.u += w * std::pow(norms.displacement(combine(a.u, b.u, at)), 2);
  }
  e.time_l2 = {std::sqrt(sq.p), std::sqrt(sq.q), std::sqrt(sq.u)};
  return e;
}

ErrorNorms error_norms(const SlabState& a, const SlabState& b, const Spaces& spaces, const TimeSlabBasis& basis,
                       double time_step) {
  return error_norms(a, b, FieldNormOperators(spaces), basis, time_step);
}

}  // namespace porosplit
