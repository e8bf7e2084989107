#include <gtest/gtest.h>

#include <Eigen/SparseLU>
#include <cmath>

#include "porosplit/assembly.hpp"
#include "porosplit/error.hpp"
#include "porosplit/solver.hpp"
#include "printers.hpp"

using namespace porosplit;

namespace {

// 2x2 unit square, one tag everywhere, both flow and mechanics fully constrained
// unless the caller changes the boundary entry.
ScenarioConfig square(int n, TimeScheme scheme, int r, int s) {
  ScenarioConfig c;
  c.mesh.kind = MeshKind::Rectangle;
  c.mesh.nx = c.mesh.ny = n;
  c.material.biot_modulus = 2.0;
  c.material.biot_coefficient = 1.0;
  c.material.mu = 1.0;
  c.material.lambda = 2.0;
  c.end_time = 0.2;
  c.time_step = 0.05;
  c.scheme = scheme;
  c.time_degree = r;
  c.space_degree = s;
  c.boundary[tags::kDefault] = BoundaryCondition{FlowCondition::Open, {true, true}, false};
  c.tolerances.fixed = 1e-10;
  c.tolerances.flow = 1e-12;
  return c;
}

double max_diff(const std::vector<Eigen::VectorXd>& a, const std::vector<Eigen::VectorXd>& b) {
  double d = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) d = std::max(d, (a[j] - b[j]).lpNorm<Eigen::Infinity>());
  return d;
}

}  // namespace

TEST(Solver, ZeroDataGivesZeroSolutionInTwoIterations) {
  const ScenarioConfig c = square(2, TimeScheme::Discontinuous, 1, 1);
  const RunResult r = run_simulation(c, SolveMode::Split);
  ASSERT_EQ(r.reports.size(), 4u);
  for (const auto& rep : r.reports) EXPECT_EQ(rep.iterations, 2);
  for (const auto& s : r.snapshots) {
    EXPECT_EQ(s.p.norm(), 0.0);
    EXPECT_EQ(s.q.norm(), 0.0);
    EXPECT_EQ(s.u.norm(), 0.0);
  }
}

// b = 0 decouples the subproblems: the split iteration is exact after the
// first sweep and stops at the minimum of two iterations.
TEST(Solver, DecoupledLimitStopsAtTwoIterations) {
  ScenarioConfig c = square(3, TimeScheme::Continuous, 2, 0);
  c.material.biot_coefficient = 0.0;
  c.loads.source = 1.0;
  c.loads.gravity = {0.0, -1.0};
  const RunResult split = run_simulation(c, SolveMode::Split);
  const RunResult mono = run_simulation(c, SolveMode::Monolithic);
  for (const auto& rep : split.reports) EXPECT_EQ(rep.iterations, 2);
  EXPECT_EQ(split.max_slab_iterations(), 2);
  EXPECT_EQ(split.total_iterations(), 8);
  for (std::size_t n = 0; n < split.slabs.size(); ++n) {
    EXPECT_LT(max_diff(split.slabs[n].p, mono.slabs[n].p), 1e-12);
    EXPECT_LT(max_diff(split.slabs[n].u, mono.slabs[n].u), 1e-12);
  }
}

// dG(0) with b = 0 is backward Euler for mixed Darcy plus a static elasticity
// solve; rebuild both from the assembly routines and compare.
TEST(Solver, Dg0DecoupledMatchesBackwardEuler) {
  ScenarioConfig c = square(2, TimeScheme::Discontinuous, 0, 0);
  c.material.biot_coefficient = 0.0;
  c.loads.source = 3.0;
  c.loads.gravity = {0.5, -1.0};
  const BiotSolver solver(c);
  const RunResult run = solver.run(SolveMode::Split);

  const Spaces& sp = solver.spaces();
  const SparseOperator mp = assemble_pressure_mass(sp.pressure);
  const SparseOperator aq = assemble_flux_mass(sp.flux, c.material.permeability);
  const SparseOperator b = assemble_div(sp.flux, sp.pressure);
  const int np = sp.pressure.num_dofs(), nq = sp.flux.num_dofs();
  ASSERT_EQ(sp.flux.num_free(), nq);  // open boundary: no flux constraints

  std::vector<Eigen::Triplet<double>> t;
  const double tau = c.time_step, inv_m = 1.0 / c.material.biot_modulus;
  for (int k = 0; k < mp.outerSize(); ++k)
    for (SparseOperator::InnerIterator it(mp, k); it; ++it) t.emplace_back(it.row(), it.col(), inv_m * it.value());
  for (int k = 0; k < b.outerSize(); ++k)
    for (SparseOperator::InnerIterator it(b, k); it; ++it) {
      t.emplace_back(it.row(), np + it.col(), tau * it.value());
      t.emplace_back(np + it.col(), it.row(), -it.value());
    }
  for (int k = 0; k < aq.outerSize(); ++k)
    for (SparseOperator::InnerIterator it(aq, k); it; ++it) t.emplace_back(np + it.row(), np + it.col(), it.value());
  SparseOperator sys(np + nq, np + nq);
  sys.setFromTriplets(t.begin(), t.end());
  Eigen::SparseLU<SparseOperator> lu(sys);
  ASSERT_EQ(lu.info(), Eigen::Success);

  const Eigen::VectorXd f = assemble_pressure_source(sp.pressure, c.source(), 0.0);
  Eigen::VectorXd p = Eigen::VectorXd::Zero(np);
  for (const FieldSnapshot& snap : run.snapshots) {
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(np + nq);
    rhs.head(np) = tau * f + inv_m * (mp * p);
    const Eigen::VectorXd x = lu.solve(rhs);
    p = x.head(np);
    EXPECT_LT((snap.p - p).lpNorm<Eigen::Infinity>(), 1e-11 * (1.0 + p.norm()));
    EXPECT_LT((snap.q - x.tail(nq)).lpNorm<Eigen::Infinity>(), 1e-11 * (1.0 + x.norm()));
  }
  EXPECT_GT(p.norm(), 0.1);

  const DofMap& h = sp.displacement;
  const SparseOperator au = restrict_operator(assemble_elasticity(h, c.material.mu, c.material.lambda), h, h);
  const Eigen::VectorXd load = h.restrict_to_free(assemble_body_force(h, c.body_force(), 0.0));
  Eigen::SimplicialLDLT<SparseOperator> ldlt(au);
  const Eigen::VectorXd u = h.extend_from_free(ldlt.solve(load));
  EXPECT_LT((run.snapshots.back().u - u).lpNorm<Eigen::Infinity>(), 1e-12);
  EXPECT_GT(u.norm(), 1e-3);
}

std::string scheme_name(const ::testing::TestParamInfo<std::tuple<TimeScheme, int>>& info) {
  return (std::get<0>(info.param) == TimeScheme::Continuous ? "cGP" : "dG") + std::to_string(std::get<1>(info.param));
}

class Schemes : public ::testing::TestWithParam<std::tuple<TimeScheme, int>> {};

TEST_P(Schemes, SplitConvergesToMonolithic) {
  const auto [scheme, r] = GetParam();
  ScenarioConfig c = benchmark_scenario(1, 0.05, scheme, r, 0, 1.0);
  c.end_time = 0.25;
  c.tolerances.fixed = 1e-10;
  const BiotSolver solver(c);
  const RunResult split = solver.run(SolveMode::Split);
  const RunResult mono = solver.run(SolveMode::Monolithic);
  ASSERT_EQ(split.slabs.size(), 5u);
  const FieldNormOperators norms(solver.spaces());
  for (std::size_t n = 0; n < split.slabs.size(); ++n) {
    const ErrorNorms e = error_norms(split.slabs[n], mono.slabs[n], norms, solver.basis(), c.time_step);
    const FieldSnapshot& ref = mono.snapshots[n];
    EXPECT_LT(e.endpoint.p, 1e-7 * norms.pressure(ref.p)) << "slab " << n + 1;
    EXPECT_LT(e.endpoint.u, 1e-7 * norms.displacement(ref.u)) << "slab " << n + 1;
    EXPECT_LT(e.time_l2.q, 1e-6 * (norms.flux(ref.q) + 1e-12)) << "slab " << n + 1;
  }
}

INSTANTIATE_TEST_SUITE_P(All, Schemes,
                         ::testing::Values(std::make_tuple(TimeScheme::Discontinuous, 0),
                                           std::make_tuple(TimeScheme::Discontinuous, 1),
                                           std::make_tuple(TimeScheme::Continuous, 1),
                                           std::make_tuple(TimeScheme::Continuous, 2)),
                         scheme_name);

// Closed drained-free column: no flux through any boundary and no source, so
// the fluid content (1/M) int p + b int div u stays zero.
TEST(Solver, FluidContentIsConserved) {
  ScenarioConfig c = square(4, TimeScheme::Discontinuous, 0, 0);
  c.mesh.side_tags = {tags::kSymmetryY, tags::kTractionFree, tags::kTractionTop, tags::kSymmetryX};
  c.boundary.clear();
  c.boundary[tags::kSymmetryY] = {FlowCondition::NoFlow, {false, true}, false};
  c.boundary[tags::kSymmetryX] = {FlowCondition::NoFlow, {true, false}, false};
  c.boundary[tags::kTractionFree] = {FlowCondition::NoFlow, {false, false}, false};
  c.boundary[tags::kTractionTop] = {FlowCondition::NoFlow, {false, false}, true};
  c.loads.traction = TractionProfile::Constant;
  c.loads.traction_value = {0.0, -1.0};
  c.tolerances.fixed = 1e-12;
  const BiotSolver solver(c);
  const RunResult run = solver.run(SolveMode::Split);
  const Spaces& sp = solver.spaces();
  const Eigen::VectorXd one_p = Eigen::VectorXd::Ones(sp.pressure.num_dofs());
  const SparseOperator mp = assemble_pressure_mass(sp.pressure);
  const SparseOperator div = assemble_coupling(sp.pressure, sp.displacement, 1.0);
  for (const FieldSnapshot& s : run.snapshots) {
    const double content = one_p.dot(mp * s.p) / c.material.biot_modulus + one_p.dot(div.transpose() * s.u);
    EXPECT_NEAR(content, 0.0, 1e-9);
    EXPECT_GT(s.p.norm(), 1e-3);
  }
}

TEST(Solver, FrozenBenchmarkIterationCounts) {
  const RunResult r = run_simulation(benchmark_scenario(1, 0.01, TimeScheme::Discontinuous, 0, 0, 1.0), SolveMode::Split);
  EXPECT_EQ(r.total_iterations(), 844);
  EXPECT_EQ(r.reports.front().iterations, 14);
  EXPECT_EQ(r.max_slab_iterations(), 18);
  for (const auto& rep : r.reports) {
    EXPECT_EQ(rep.termination, Termination::Converged);
    EXPECT_EQ(static_cast<int>(rep.increment_p.size()), rep.iterations);
  }
}

TEST(Solver, UndertunedIterationBlowsUp) {
  const ScenarioConfig c = benchmark_scenario(1, 0.01, TimeScheme::Discontinuous, 0, 0, 0.25);
  try {
    run_simulation(c, SolveMode::Split);
    FAIL() << "expected divergence";
  } catch (const DivergenceError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Divergence);
    EXPECT_EQ(e.slab(), 1);
    EXPECT_EQ(e.iterations_before(), 0);
    EXPECT_EQ(e.report().termination, Termination::BlownUp);
    EXPECT_LT(e.report().iterations, c.tolerances.max_fixed_iters);
  }
}

TEST(Solver, IterationCapReportsMaxIters) {
  ScenarioConfig c = benchmark_scenario(1, 0.01, TimeScheme::Discontinuous, 0, 0, 1.0);
  c.tolerances.max_fixed_iters = 5;
  try {
    run_simulation(c, SolveMode::Split);
    FAIL() << "expected divergence";
  } catch (const DivergenceError& e) {
    EXPECT_EQ(e.report().termination, Termination::MaxIters);
    EXPECT_EQ(e.report().iterations, 5);
  }
}

// The storage-weighted pressure increments contract at most at the
// theoretical rate LM / (1 + LM).
TEST(Solver, ContractionWithinTheoreticalBound) {
  const ScenarioConfig c = benchmark_scenario(1, 0.01, TimeScheme::Discontinuous, 0, 0, 1.0);
  const BiotSolver solver(c);
  const RunResult r = solver.run(SolveMode::Split);
  const double bound = contraction_factor(c.material, solver.tuning());
  const ContractionEstimate est = weighted_contraction_estimate(r.reports.front());
  EXPECT_GT(est.geometric_mean, 0.0);
  EXPECT_LE(est.geometric_mean, bound * (1.0 + 1e-9));
}

TEST(Contraction, GeometricSequence) {
  const ContractionEstimate est = contraction_estimate(std::vector<double>{3.0, 1.0, 0.5, 0.25, 0.125});
  ASSERT_EQ(est.ratios.size(), 4u);
  EXPECT_NEAR(est.ratios[0], 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(est.geometric_mean, 0.5, 1e-15);
  try {
    contraction_estimate(std::vector<double>{1.0, 0.5});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InsufficientData);
  }
}

TEST(ErrorNorms, ConstantPressureOffset) {
  const ScenarioConfig c = square(2, TimeScheme::Discontinuous, 1, 1);
  const BiotSolver solver(c);
  const RunResult r = solver.run(SolveMode::Monolithic);
  SlabState shifted = r.slabs.front();
  for (auto& p : shifted.p) p.array() += 2.0;
  const ErrorNorms e = error_norms(shifted, r.slabs.front(), solver.spaces(), solver.basis(), c.time_step);
  EXPECT_NEAR(e.endpoint.p, 2.0, 1e-13);
  EXPECT_NEAR(e.time_l2.p, 2.0 * std::sqrt(c.time_step), 1e-13);
  EXPECT_EQ(e.endpoint.u, 0.0);
  EXPECT_EQ(e.coefficients.q, 0.0);
  SlabState truncated = shifted;
  truncated.p.pop_back();
  EXPECT_THROW(error_norms(truncated, shifted, solver.spaces(), solver.basis(), c.time_step), Error);
}

TEST(Solver, BoundarySpecMustMatchMeshTags) {
  ScenarioConfig c = benchmark_scenario(1, 0.01, TimeScheme::Discontinuous, 0, 0, 1.0);
  c.boundary.erase(tags::kSymmetryY);
  try {
    BiotSolver solver(c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidBoundarySpec);
  }
  c = benchmark_scenario(1, 0.01, TimeScheme::Discontinuous, 0, 0, 1.0);
  c.boundary[tags::kDefault] = {};
  EXPECT_THROW(BiotSolver{c}, Error);
}

TEST(Solver, TerminationNames) {
  EXPECT_EQ(to_string(Termination::Converged), "Converged");
  EXPECT_EQ(to_string(Termination::MaxIters), "MaxIters");
  EXPECT_EQ(to_string(Termination::BlownUp), "BlownUp");
}
