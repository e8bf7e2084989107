#pragma once

#include <Eigen/Sparse>
#include <array>
#include <functional>
#include <set>

#include "porosplit/spaces.hpp"

namespace porosplit {

using SparseOperator = Eigen::SparseMatrix<double>;

using ScalarField = std::function<double(const Point2&, double)>;
using VectorField = std::function<std::array<double, 2>(const Point2&, double)>;

// Bilinear forms. Row index = test space, column index = trial space. All
// operators are assembled over every dof; constraints are applied later by
// restrict_operator.

/// <p, w> on the pressure space.
SparseOperator assemble_pressure_mass(const DofMap& pressure);

/// <K^{-1} q, v>. Throws InvalidMaterial if K is not symmetric positive definite.
SparseOperator assemble_flux_mass(const DofMap& flux, const Eigen::Matrix2d& permeability);

/// <div v, w>: rows pressure, columns flux.
SparseOperator assemble_div(const DofMap& flux, const DofMap& pressure);

/// 2 mu <eps(u), eps(z)> + lambda <div u, div z>.
SparseOperator assemble_elasticity(const DofMap& displacement, double mu, double lambda);

/// <u, z> on the displacement space (both components).
SparseOperator assemble_displacement_mass(const DofMap& displacement);

/// b <p, div z>: rows displacement, columns pressure.
SparseOperator assemble_coupling(const DofMap& pressure, const DofMap& displacement, double biot_coefficient);

// Load vectors (full dof length).

/// <f(., t), w>.
Eigen::VectorXd assemble_pressure_source(const DofMap& pressure, const ScalarField& source, double t,
                                         int quadrature_points = 0);
/// <F(., t), z>.
Eigen::VectorXd assemble_body_force(const DofMap& displacement, const VectorField& force, double t,
                                    int quadrature_points = 0);
/// Boundary traction  int_{tagged facets} g(., t) . z ds.
Eigen::VectorXd assemble_traction(const DofMap& displacement, const std::set<BoundaryTag>& tagged,
                                  const VectorField& traction, double t);
/// Natural pressure condition of the mixed Darcy equation,
/// -int_{tagged facets} p_D(., t) v.n ds.
Eigen::VectorXd assemble_pressure_boundary(const DofMap& flux, const std::set<BoundaryTag>& tagged,
                                           const ScalarField& boundary_pressure, double t);

/// Submatrix on the free (unconstrained) rows and columns.
SparseOperator restrict_operator(const SparseOperator& op, const DofMap& rows, const DofMap& cols);

}  // namespace porosplit
