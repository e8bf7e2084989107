#include <gtest/gtest.h>

#include <cmath>

#include "porosplit/manufactured.hpp"
#include "printers.hpp"

using namespace porosplit;

TEST(Manufactured, ShapeDerivativesMatchFiniteDifferences) {
  const ScalarShape g({{1.0, {Factor1D::Kind::Cos, 1}, {Factor1D::Kind::Sin, 2}},
                       {0.5, {Factor1D::Kind::Monomial, 3}, {Factor1D::Kind::Monomial, 1}}});
  const Point2 x{0.3, 0.7};
  const double h = 1e-5;
  const auto grad = g.gradient(x);
  const auto hess = g.hessian(x);
  EXPECT_NEAR(grad[0], (g.value({x.x + h, x.y}) - g.value({x.x - h, x.y})) / (2 * h), 1e-8);
  EXPECT_NEAR(grad[1], (g.value({x.x, x.y + h}) - g.value({x.x, x.y - h})) / (2 * h), 1e-8);
  const auto gx = [&](double dy) { return g.gradient({x.x, x.y + dy})[0]; };
  EXPECT_NEAR(hess[1], (gx(h) - gx(-h)) / (2 * h), 1e-7);
  EXPECT_NEAR(hess[0], (g.gradient({x.x + h, x.y})[0] - g.gradient({x.x - h, x.y})[0]) / (2 * h), 1e-7);
}

TEST(Manufactured, TimeProfile) {
  const TimeProfile theta{{0.0, 1.0, 0.0, 2.0}};
  EXPECT_DOUBLE_EQ(theta.value(0.5), 0.5 + 0.25);
  EXPECT_DOUBLE_EQ(theta.derivative(0.5), 1.0 + 1.5);
}

TEST(Manufactured, ExactFluxIsDarcy) {
  const auto mat = manufactured_material();
  const ManufacturedSolution sol = smooth_solution(TimeProfile{{0.0, 1.0}});
  const auto q = sol.exact_flux(mat)({0.2, 0.4}, 0.5);
  const auto grad = sol.pressure.gradient({0.2, 0.4});
  const Eigen::Vector2d expected = -0.5 * (mat.permeability * Eigen::Vector2d(grad[0], grad[1]));
  EXPECT_NEAR(q[0], expected(0), 1e-14);
  EXPECT_NEAR(q[1], expected(1), 1e-14);
}

std::string case_name(const ::testing::TestParamInfo<std::tuple<TimeScheme, int, int>>& info) {
  return (std::get<0>(info.param) == TimeScheme::Continuous ? "cGP" : "dG") + std::to_string(std::get<1>(info.param)) +
         "_s" + std::to_string(std::get<2>(info.param));
}

class Exactness : public ::testing::TestWithParam<std::tuple<TimeScheme, int, int>> {};

// Data reproducible by the discrete spaces (linear in time, Q_s in space)
// is recovered to rounding.
TEST_P(Exactness, PolynomialDataIsReproduced) {
  const auto [scheme, r, s] = GetParam();
  const RateRow row = run_exactness_check({r, scheme, s, 1});
  EXPECT_LT(row.errors.p, 1e-10);
  EXPECT_LT(row.errors.q, 1e-10);
  EXPECT_LT(row.errors.u, 1e-10);
}

INSTANTIATE_TEST_SUITE_P(All, Exactness,
                         ::testing::Values(std::make_tuple(TimeScheme::Discontinuous, 1, 0),
                                           std::make_tuple(TimeScheme::Discontinuous, 1, 1),
                                           std::make_tuple(TimeScheme::Continuous, 1, 1),
                                           std::make_tuple(TimeScheme::Continuous, 2, 1)),
                         case_name);

TEST(Rates, SpaceOrdersLowestDegree) {
  const auto rows = run_space_study({1, TimeScheme::Discontinuous, 0, 3});
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_TRUE(std::isnan(rows.front().orders.p));
  EXPECT_NEAR(rows.back().orders.p, 1.0, 0.1);
  EXPECT_NEAR(rows.back().orders.q, 1.0, 0.15);
  EXPECT_NEAR(rows.back().orders.u, 2.0, 0.15);
}

TEST(Rates, TimeOrders) {
  const auto dg0 = run_time_study({0, TimeScheme::Discontinuous, 1, 3});
  EXPECT_NEAR(dg0.back().orders.p, 1.0, 0.1);
  EXPECT_NEAR(dg0.back().orders.u, 1.0, 0.1);
  const auto cgp1 = run_time_study({1, TimeScheme::Continuous, 1, 3});
  EXPECT_NEAR(cgp1.back().orders.p, 2.0, 0.1);
  EXPECT_NEAR(cgp1.back().orders.q, 2.0, 0.1);
  EXPECT_NEAR(cgp1.back().orders.u, 2.0, 0.1);
  for (std::size_t k = 1; k < cgp1.size(); ++k) EXPECT_LT(cgp1[k].errors.p, cgp1[k - 1].errors.p);
}
