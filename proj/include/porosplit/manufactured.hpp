#pragma once

#include <array>
#include <string>
#include <vector>

#include "porosplit/scenario.hpp"
#include "porosplit/solver.hpp"

namespace porosplit {

/// One-dimensional factor of a separable shape: x^k, sin(k pi x) or cos(k pi x).
struct Factor1D {
  enum class Kind { Monomial, Sin, Cos };
  Kind kind = Kind::Monomial;
  int k = 0;

  double value(double x) const;
  double d1(double x) const;
  double d2(double x) const;
};

/// Sum of separable terms c X(x) Y(y), with analytic first and second derivatives.
class ScalarShape {
 public:
  struct Term {
    double coefficient;
    Factor1D x;
    Factor1D y;
  };

  ScalarShape() = default;
  explicit ScalarShape(std::vector<Term> terms) : terms_(std::move(terms)) {}

  double value(const Point2& p) const;
  std::array<double, 2> gradient(const Point2& p) const;
  /// (xx, xy, yy).
  std::array<double, 3> hessian(const Point2& p) const;

 private:
  std::vector<Term> terms_;
};

/// Polynomial time profile sum_k a_k t^k with a_0 = 0 (zero initial data).
struct TimeProfile {
  std::vector<double> coefficients;

  double value(double t) const;
  double derivative(double t) const;
};

/// p = theta(t) g(x), u = theta(t) w(x) on the unit square with open-flow,
/// fully clamped boundaries; the data f, F and p_D follow from the Biot
/// equations for the given material.
struct ManufacturedSolution {
  ScalarShape pressure;
  std::array<ScalarShape, 2> displacement;
  TimeProfile profile;

  ScalarField exact_pressure() const;
  VectorField exact_flux(const MaterialParams& material) const;
  VectorField exact_displacement() const;

  /// Scenario on an n x n unit-square mesh with the derived data installed.
  ScenarioConfig scenario(const MaterialParams& material, int cells_per_side, double end_time, double time_step,
                          TimeScheme scheme, int time_degree, int space_degree) const;
};

/// Smooth trigonometric shapes (not in any finite element space).
ManufacturedSolution smooth_solution(TimeProfile profile);
/// Shapes inside the discrete spaces of degree s: p in Q_s with K grad p in
/// RT_s, u in Q_{s+1} vanishing on the boundary. For s = 0 this is p
/// constant in space and u = 0.
ManufacturedSolution polynomial_solution(int space_degree, TimeProfile profile);

/// Unit material used by the convergence studies.
MaterialParams manufactured_material();

struct FieldErrors {
  double p = 0.0;
  double q = 0.0;
  double u = 0.0;
};

/// L2(Omega) errors of a discrete snapshot against the exact fields at its time.
FieldErrors snapshot_errors(const BiotSolver& solver, const FieldSnapshot& snapshot,
                            const ManufacturedSolution& exact);

struct RateRow {
  std::string study;  // "space" | "time" | "exactness"
  double h = 0.0;
  double tau = 0.0;
  FieldErrors errors;
  FieldErrors orders;  // NaN on the first row of a study
};

struct MmsOptions {
  int time_degree = 1;
  TimeScheme scheme = TimeScheme::Discontinuous;
  int space_degree = 0;
  int refinements = 3;  // number of halvings after the coarsest level
};

/// Convergence studies in monolithic mode:
///  space: smooth shapes, theta(t) = t, meshes 2^k x 2^k cells (k = 1..), a
///         single-slab run (time-exact for r >= 1).
///  time:  shapes exact in space, theta of degree r+3, tau = 2^-k.
///  exactness: shapes exact in space, theta(t) = t.
std::vector<RateRow> run_space_study(const MmsOptions& options);
std::vector<RateRow> run_time_study(const MmsOptions& options);
RateRow run_exactness_check(const MmsOptions& options);

}  // namespace porosplit
