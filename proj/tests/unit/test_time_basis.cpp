#include <gtest/gtest.h>

#include <cmath>

#include "porosplit/error.hpp"
#include "porosplit/time_basis.hpp"

using namespace porosplit;

TEST(TimeBasis, FrozenDg0) {
  const auto b = build_dg_basis(0);
  EXPECT_DOUBLE_EQ(b.nodes[0], 0.5);
  EXPECT_NEAR(b.alpha(0, 0), 0.0, 1e-15);
  EXPECT_NEAR(b.alpha_tilde(0, 0), 1.0, 1e-15);
  EXPECT_NEAR(b.beta_ref(0), 1.0, 1e-15);
  EXPECT_NEAR(b.gamma(0), 1.0, 1e-15);
  EXPECT_EQ(b.name(), "dG(0)");
}

// Nodes {0, 1/2}: the interior unknown is the midpoint value.
TEST(TimeBasis, FrozenCgp1) {
  const auto b = build_cgp_basis(1);
  EXPECT_EQ(b.nodes, (std::vector<double>{0.0, 0.5}));
  EXPECT_NEAR(b.alpha(1, 0), -2.0, 1e-14);
  EXPECT_NEAR(b.alpha(1, 1), 2.0, 1e-14);
  EXPECT_NEAR(b.beta_ref(1), 1.0, 1e-15);
  EXPECT_EQ(b.first_unknown(), 1);
  EXPECT_EQ(b.num_unknown_nodes(), 1);
  // end value is the extrapolation 2 U(1/2) - U(0)
  EXPECT_NEAR(b.right_end_values()(0), -1.0, 1e-14);
  EXPECT_NEAR(b.right_end_values()(1), 2.0, 1e-14);
}

TEST(TimeBasis, FrozenDg1) {
  const auto b = build_dg_basis(1);
  const double g = 0.5 / std::sqrt(3.0);
  EXPECT_NEAR(b.nodes[0], 0.5 - g, 1e-15);
  EXPECT_NEAR(b.beta_ref(0), 0.5, 1e-14);
  EXPECT_NEAR(b.gamma(0), 0.5 + 0.5 * std::sqrt(3.0), 1e-13);
  EXPECT_NEAR(b.gamma(1), 0.5 - 0.5 * std::sqrt(3.0), 1e-13);
}

TEST(TimeBasis, InvalidDegrees) {
  EXPECT_THROW(build_cgp_basis(0), Error);
  EXPECT_THROW(build_dg_basis(-1), Error);
}

class Degrees : public ::testing::TestWithParam<int> {};

// The upwind tableau satisfies alpha~ + alpha~^T = phi(1)phi(1)^T + phi(0)phi(0)^T
// (integration by parts), the energy identity behind dG stability.
TEST_P(Degrees, DgUpwindTableauIdentity) {
  const int r = GetParam();
  const auto b = build_dg_basis(r);
  Eigen::VectorXd phi0(r + 1);
  for (int j = 0; j <= r; ++j) phi0(j) = b.phi(j, 0.0);
  const Eigen::VectorXd phi1 = b.right_end_values();
  const Eigen::MatrixXd lhs = b.alpha_tilde + b.alpha_tilde.transpose();
  const Eigen::MatrixXd rhs = phi1 * phi1.transpose() + phi0 * phi0.transpose();
  EXPECT_LT((lhs - rhs).norm(), 1e-12);
  EXPECT_NEAR(b.beta_ref.sum(), 1.0, 1e-14);
  EXPECT_LT((b.gamma - phi0).norm(), 1e-14);
}

// alpha applied to samples of a degree-r polynomial reproduces the
// Gauss-weighted derivative at the test nodes.
TEST_P(Degrees, CgpTableauDifferentiatesExactly) {
  const int r = GetParam() + 1;
  const auto b = build_cgp_basis(r);
  const auto gauss = gauss_nodes(r);
  for (int k = 0; k <= r; ++k) {
    Eigen::VectorXd samples(r + 1);
    for (int j = 0; j <= r; ++j) samples(j) = std::pow(b.nodes[j], k);
    const Eigen::VectorXd lhs = b.alpha * samples;
    EXPECT_NEAR(lhs(0), 0.0, 1e-15);
    for (int i = 1; i <= r; ++i) {
      const double exact = k == 0 ? 0.0 : b.beta_ref(i) * k * std::pow(gauss.nodes[i - 1], k - 1);
      EXPECT_NEAR(lhs(i), exact, 1e-12) << "r=" << r << " k=" << k << " i=" << i;
    }
  }
}

TEST_P(Degrees, PartitionOfUnity) {
  for (const auto& b : {build_dg_basis(GetParam()), build_cgp_basis(GetParam() + 1)}) {
    for (double s : {0.0, 0.3, 1.0}) {
      double sum = 0.0, dsum = 0.0;
      for (int j = 0; j < b.num_nodes(); ++j) {
        sum += b.phi(j, s);
        dsum += b.dphi(j, s);
      }
      EXPECT_NEAR(sum, 1.0, 1e-13);
      EXPECT_NEAR(dsum, 0.0, 1e-11);
    }
    EXPECT_LT(b.alpha.rowwise().sum().norm(), 1e-12);
  }
}

INSTANTIATE_TEST_SUITE_P(R, Degrees, ::testing::Values(0, 1, 2, 3));
