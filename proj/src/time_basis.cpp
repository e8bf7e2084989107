#include "porosplit/time_basis.hpp"

#include "porosplit/error.hpp"

namespace porosplit {

double TimeSlabBasis::phi(int j, double s) const { return LagrangeBasis1D(nodes).value(j, s); }

double TimeSlabBasis::dphi(int j, double s) const { return LagrangeBasis1D(nodes).derivative(j, s); }

Eigen::VectorXd TimeSlabBasis::right_end_values() const {
  const LagrangeBasis1D basis(nodes);
  Eigen::VectorXd v(num_nodes());
  for (int j = 0; j < num_nodes(); ++j) v(j) = basis.value(j, 1.0);
  return v;
}

std::string TimeSlabBasis::name() const {
  return (scheme == TimeScheme::Continuous ? "cGP(" : "dG(") + std::to_string(degree) + ")";
}

TimeSlabBasis build_cgp_basis(int r) {
  if (r < 1) throw Error(ErrorKind::InvalidOrder, "cGP(r) requires r >= 1");
  const auto gauss = gauss_nodes(r);

  TimeSlabBasis basis;
  basis.scheme = TimeScheme::Continuous;
  basis.degree = r;
  basis.nodes.push_back(0.0);
  basis.nodes.insert(basis.nodes.end(), gauss.nodes.begin(), gauss.nodes.end());

  const LagrangeBasis1D trial(basis.nodes);
  const LagrangeBasis1D test(gauss.nodes);
  // phi_j' psi_i has degree 2r - 2; r + 1 points integrate it exactly.
  const auto rule = gauss_nodes(r + 1);
  basis.alpha = Eigen::MatrixXd::Zero(r + 1, r + 1);
  for (int i = 1; i <= r; ++i) {
    for (int j = 0; j <= r; ++j) {
      double a = 0.0;
      for (std::size_t q = 0; q < rule.size(); ++q) {
        a += rule.weights[q] * trial.derivative(j, rule.nodes[q]) * test.value(i - 1, rule.nodes[q]);
      }
      basis.alpha(i, j) = a;
    }
  }
  // psi_i^2 has degree 2r - 2, so its integral is the Gauss weight.
  basis.beta_ref = Eigen::VectorXd::Zero(r + 1);
  for (int i = 1; i <= r; ++i) basis.beta_ref(i) = gauss.weights[i - 1];
  return basis;
}

TimeSlabBasis build_dg_basis(int r) {
  if (r < 0) throw Error(ErrorKind::InvalidOrder, "dG(r) requires r >= 0");
  const auto gauss = gauss_nodes(r + 1);

  TimeSlabBasis basis;
  basis.scheme = TimeScheme::Discontinuous;
  basis.degree = r;
  basis.nodes = gauss.nodes;

  const LagrangeBasis1D phi(basis.nodes);
  const auto rule = gauss_nodes(r + 2);
  basis.alpha = Eigen::MatrixXd::Zero(r + 1, r + 1);
  basis.beta_ref = Eigen::VectorXd::Zero(r + 1);
  basis.gamma = Eigen::VectorXd::Zero(r + 1);
  for (int i = 0; i <= r; ++i) {
    for (int j = 0; j <= r; ++j) {
      double a = 0.0;
      for (std::size_t q = 0; q < rule.size(); ++q) {
        a += rule.weights[q] * phi.derivative(j, rule.nodes[q]) * phi.value(i, rule.nodes[q]);
      }
      basis.alpha(i, j) = a;
    }
    double b = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double v = phi.value(i, rule.nodes[q]);
      b += rule.weights[q] * v * v;
    }
    basis.beta_ref(i) = b;
    basis.gamma(i) = phi.value(i, 0.0);
  }
  basis.alpha_tilde = basis.alpha + basis.gamma * basis.gamma.transpose();
  return basis;
}

TimeSlabBasis build_time_basis(TimeScheme scheme, int r) {
  return scheme == TimeScheme::Continuous ? build_cgp_basis(r) : build_dg_basis(r);
}

}  // namespace porosplit
