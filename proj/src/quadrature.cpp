#include "porosplit/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "porosplit/error.hpp"

namespace porosplit {

namespace {

// Legendre polynomial P_n and its derivative at x in [-1, 1].
void legendre(int n, double x, double& p, double& dp) {
  double p0 = 1.0;
  double p1 = x;
  if (n == 0) {
    p = 1.0;
    dp = 0.0;
    return;
  }
  for (int k = 2; k <= n; ++k) {
    const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = pk;
  }
  p = p1;
  dp = n * (x * p1 - p0) / (x * x - 1.0);
}

}  // namespace

QuadratureRule1D gauss_nodes(int count) {
  if (count < 1) {
    throw Error(ErrorKind::InvalidOrder, "Gauss rule needs at least one point");
  }
  QuadratureRule1D rule;
  rule.nodes.resize(count);
  rule.weights.resize(count);
  for (int i = 0; i < count; ++i) {
    // Chebyshev-type initial guess, then Newton on P_n. Roots come out
    // in decreasing order on [-1, 1]; store them increasing on [0, 1].
    double x = std::cos(std::numbers::pi * (i + 0.75) / (count + 0.5));
    double p = 0.0;
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      legendre(count, x, p, dp);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    legendre(count, x, p, dp);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[count - 1 - i] = 0.5 * (x + 1.0);
    rule.weights[count - 1 - i] = 0.5 * w;
  }
  if (count % 2 == 1) rule.nodes[count / 2] = 0.5;
  return rule;
}

std::vector<double> gauss_lobatto_points(int count) {
  if (count < 2) {
    throw Error(ErrorKind::InvalidOrder, "Gauss-Lobatto rule needs at least two points");
  }
  // Interior points are the roots of P'_{n-1}, found by Newton with the
  // Chebyshev-Gauss-Lobatto points as initial guesses.
  const int n = count - 1;
  std::vector<double> pts(count);
  pts.front() = 0.0;
  pts.back() = 1.0;
  for (int i = 1; i < n; ++i) {
    double x = -std::cos(std::numbers::pi * i / n);
    for (int it = 0; it < 100; ++it) {
      double p = 0.0;
      double dp = 0.0;
      legendre(n, x, p, dp);
      // P'' from the Legendre ODE: (1-x^2) P'' = 2x P' - n(n+1) P.
      const double d2p = (2.0 * x * dp - n * (n + 1.0) * p) / (1.0 - x * x);
      const double dx = dp / d2p;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    pts[i] = 0.5 * (x + 1.0);
  }
  if (count % 2 == 1) pts[count / 2] = 0.5;
  return pts;
}

QuadratureRule2D tensor_gauss(int count_per_axis) {
  const auto rule = gauss_nodes(count_per_axis);
  QuadratureRule2D out;
  out.points.reserve(rule.size() * rule.size());
  for (std::size_t j = 0; j < rule.size(); ++j) {
    for (std::size_t i = 0; i < rule.size(); ++i) {
      out.points.push_back({rule.nodes[i], rule.nodes[j], rule.weights[i] * rule.weights[j]});
    }
  }
  return out;
}

LagrangeBasis1D::LagrangeBasis1D(std::vector<double> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.empty()) {
    throw Error(ErrorKind::InvalidOrder, "Lagrange basis needs at least one node");
  }
  inv_denominators_.resize(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    double d = 1.0;
    for (std::size_t m = 0; m < nodes_.size(); ++m) {
      if (m != i) d *= nodes_[i] - nodes_[m];
    }
    if (d == 0.0) throw Error(ErrorKind::InvalidInput, "Lagrange nodes must be distinct");
    inv_denominators_[i] = 1.0 / d;
  }
}

double LagrangeBasis1D::value(std::size_t i, double x) const {
  double v = inv_denominators_[i];
  for (std::size_t m = 0; m < nodes_.size(); ++m) {
    if (m != i) v *= x - nodes_[m];
  }
  return v;
}

double LagrangeBasis1D::derivative(std::size_t i, double x) const {
  double sum = 0.0;
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    if (k == i) continue;
    double term = 1.0;
    for (std::size_t m = 0; m < nodes_.size(); ++m) {
      if (m != i && m != k) term *= x - nodes_[m];
    }
    sum += term;
  }
  return sum * inv_denominators_[i];
}

}  // namespace porosplit
