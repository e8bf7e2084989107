#pragma once

#include <Eigen/Dense>
#include <array>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <vector>

#include "porosplit/mesh.hpp"
#include "porosplit/quadrature.hpp"

namespace porosplit {

enum class SpaceKind { Pressure, Flux, Displacement };

/// Discontinuous tensor-product Q_s on the reference square, nodal at the
/// (s+1)^2 Gauss points. Local index b*(s+1) + a for node (a, b).
class PressureElement {
 public:
  explicit PressureElement(int degree);

  int degree() const { return degree_; }
  int size() const { return (degree_ + 1) * (degree_ + 1); }
  void values(double xi, double eta, std::span<double> out) const;

 private:
  int degree_;
  LagrangeBasis1D basis_;
};

/// Raviart-Thomas RT_s on the reference square. The x-component family is
/// L_a(xi) l_k(eta) with L on the s+2 Gauss-Lobatto points and l on the
/// s+1 Gauss points (y-component family transposed). Facet functions are
/// signed so that their outward normal component equals l_k along the
/// facet parametrization. Local order: facets 0..3 with s+1 functions each,
/// then interior x-family (a = 1..s, k = 0..s), then interior y-family.
class FluxElement {
 public:
  explicit FluxElement(int degree);

  int degree() const { return degree_; }
  int size() const { return 2 * (degree_ + 1) * (degree_ + 2); }
  int facet_dofs() const { return degree_ + 1; }
  void values(double xi, double eta, std::span<std::array<double, 2>> out) const;
  void divergences(double xi, double eta, std::span<double> out) const;
  /// Weight of facet dof k at facet parameter t (the reference normal flux).
  double facet_trace(int k, double t) const { return normal_.value(k, t); }

 private:
  int degree_;
  LagrangeBasis1D normal_;
  LagrangeBasis1D tangential_;
};

/// Continuous scalar Q_l Lagrange element on Gauss-Lobatto nodes; local
/// node index b*(l+1) + a.
class LagrangeElement {
 public:
  explicit LagrangeElement(int degree);

  int degree() const { return degree_; }
  int size() const { return (degree_ + 1) * (degree_ + 1); }
  void values(double xi, double eta, std::span<double> out) const;
  /// Reference gradients (d/dxi, d/deta).
  void gradients(double xi, double eta, std::span<std::array<double, 2>> out) const;
  std::span<const double> nodes_1d() const { return basis_.nodes(); }

 private:
  int degree_;
  LagrangeBasis1D basis_;
};

/// Degree-of-freedom layout of one finite element space on a mesh.
/// Displacement dofs are interleaved: dof = 2 * node + component.
class DofMap {
 public:
  DofMap(std::shared_ptr<const Mesh> mesh, SpaceKind kind, int degree, int num_dofs, int dofs_per_cell,
         std::vector<int> cell_dofs, std::vector<double> cell_signs, std::vector<bool> constrained);

  const Mesh& mesh() const { return *mesh_; }
  const std::shared_ptr<const Mesh>& mesh_ptr() const { return mesh_; }
  SpaceKind kind() const { return kind_; }
  int degree() const { return degree_; }
  int num_dofs() const { return num_dofs_; }
  int dofs_per_cell() const { return dofs_per_cell_; }
  int num_free() const { return num_free_; }

  std::span<const int> cell_dofs(int cell) const {
    return {cell_dofs_.data() + static_cast<std::size_t>(cell) * dofs_per_cell_,
            static_cast<std::size_t>(dofs_per_cell_)};
  }
  /// +1/-1 per local dof; flips facet functions onto the global facet
  /// normal (the outward normal of the facet's first cell).
  std::span<const double> cell_signs(int cell) const {
    return {cell_signs_.data() + static_cast<std::size_t>(cell) * dofs_per_cell_,
            static_cast<std::size_t>(dofs_per_cell_)};
  }
  bool is_constrained(int dof) const { return constrained_[dof]; }
  /// Position among the free dofs, or -1 for a constrained dof.
  int free_index(int dof) const { return free_index_[dof]; }
  const std::vector<int>& free_dofs() const { return free_dofs_; }

  Eigen::VectorXd restrict_to_free(const Eigen::VectorXd& full) const;
  Eigen::VectorXd extend_from_free(const Eigen::VectorXd& free) const;

 private:
  std::shared_ptr<const Mesh> mesh_;
  SpaceKind kind_;
  int degree_;
  int num_dofs_;
  int dofs_per_cell_;
  std::vector<int> cell_dofs_;
  std::vector<double> cell_signs_;
  std::vector<bool> constrained_;
  std::vector<int> free_index_;
  std::vector<int> free_dofs_;
  int num_free_ = 0;
};

/// Per-tag per-component displacement constraints: fixed[tag][c] == true
/// pins component c to zero on facets carrying tag.
using DisplacementConstraints = std::map<BoundaryTag, std::array<bool, 2>>;

DofMap build_pressure_space(std::shared_ptr<const Mesh> mesh, int s);
DofMap build_flux_space(std::shared_ptr<const Mesh> mesh, int s, const std::set<BoundaryTag>& essential);
DofMap build_displacement_space(std::shared_ptr<const Mesh> mesh, int degree, const DisplacementConstraints& fixed);

/// Physical coordinates of every displacement node (index dof / 2).
std::vector<Point2> displacement_node_coordinates(const DofMap& space);

// Pointwise evaluation of finite element functions on a cell.
double evaluate_pressure(const DofMap& space, const Eigen::VectorXd& coeffs, int cell, double xi, double eta);
std::array<double, 2> evaluate_flux(const DofMap& space, const Eigen::VectorXd& coeffs, int cell, double xi,
                                    double eta);
double evaluate_flux_divergence(const DofMap& space, const Eigen::VectorXd& coeffs, int cell, double xi,
                                double eta);
std::array<double, 2> evaluate_displacement(const DofMap& space, const Eigen::VectorXd& coeffs, int cell,
                                            double xi, double eta);

/// The three spaces of the flow/mechanics discretization, W_h^s, V_h^s and
/// the displacement space of degree s+1.
struct Spaces {
  DofMap pressure;
  DofMap flux;
  DofMap displacement;
};

}  // namespace porosplit
