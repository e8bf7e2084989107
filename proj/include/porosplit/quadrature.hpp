#pragma once

#include <span>
#include <vector>

namespace porosplit {

/// Nodes and weights of a one-dimensional rule on [0, 1].
struct QuadratureRule1D {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

/// Gauss-Legendre rule with `count` points mapped to [0, 1]. Exact for
/// polynomials of degree <= 2 count - 1. Throws InvalidOrder for count < 1.
QuadratureRule1D gauss_nodes(int count);

/// Gauss-Lobatto points on [0, 1] (both endpoints included), count >= 2.
std::vector<double> gauss_lobatto_points(int count);

/// Tensor product of a 1D rule with itself on the reference square.
struct QuadratureRule2D {
  struct Point {
    double xi;
    double eta;
    double weight;
  };
  std::vector<Point> points;
};

QuadratureRule2D tensor_gauss(int count_per_axis);

/// Lagrange interpolation basis on an arbitrary set of distinct nodes.
class LagrangeBasis1D {
 public:
  explicit LagrangeBasis1D(std::vector<double> nodes);

  std::size_t size() const { return nodes_.size(); }
  std::span<const double> nodes() const { return nodes_; }

  double value(std::size_t i, double x) const;
  double derivative(std::size_t i, double x) const;

 private:
  std::vector<double> nodes_;
  std::vector<double> inv_denominators_;
};

}  // namespace porosplit
