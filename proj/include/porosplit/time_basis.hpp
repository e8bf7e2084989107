#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "porosplit/quadrature.hpp"

namespace porosplit {

enum class TimeScheme { Continuous, Discontinuous };

/// Lagrange basis of one time slab on the reference interval [0, 1] with
/// the tableau coefficients of the slab equations.
///
/// Rows of `alpha` are indexed by test functions and columns by trial
/// nodes. For the continuous Galerkin-Petrov scheme the test space is the
/// degree r-1 Lagrange basis on the r Gauss points, so rows 1..r are used
/// and row 0 is zero; the time derivative of the trial function is tested
/// against it, alpha(i, j) = int phi_j' psi_i. For the discontinuous
/// scheme trial and test bases coincide and rows 0..r are used.
///
/// `beta_ref(i)` is the reference-interval value; the slab value is
/// tau * beta_ref(i). `gamma` and `alpha_tilde` are filled only for the
/// discontinuous scheme.
struct TimeSlabBasis {
  TimeScheme scheme = TimeScheme::Discontinuous;
  int degree = 0;
  std::vector<double> nodes;
  Eigen::MatrixXd alpha;
  Eigen::VectorXd beta_ref;
  Eigen::VectorXd gamma;
  Eigen::MatrixXd alpha_tilde;

  int num_nodes() const { return degree + 1; }
  /// Index of the first coefficient that is an unknown of the slab system.
  int first_unknown() const { return scheme == TimeScheme::Continuous ? 1 : 0; }
  int num_unknown_nodes() const { return num_nodes() - first_unknown(); }

  /// Tableau multiplying the storage-type terms: alpha_tilde for the
  /// discontinuous scheme (it carries the upwind jump), alpha otherwise.
  const Eigen::MatrixXd& storage_tableau() const {
    return scheme == TimeScheme::Discontinuous ? alpha_tilde : alpha;
  }

  double phi(int j, double s) const;
  double dphi(int j, double s) const;
  /// Values phi_j(1), used to pass slab end states forward.
  Eigen::VectorXd right_end_values() const;

  std::string name() const;
};

TimeSlabBasis build_cgp_basis(int r);
TimeSlabBasis build_dg_basis(int r);
TimeSlabBasis build_time_basis(TimeScheme scheme, int r);

}  // namespace porosplit
