#include "porosplit/assembly.hpp"

#include <vector>

#include "porosplit/error.hpp"

namespace porosplit {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

// Physical gradient from a reference gradient, grad = J^{-T} grad_ref.
std::array<double, 2> push_gradient(const CellMapping& m, const std::array<double, 2>& g) {
  return {(m.jac[3] * g[0] - m.jac[1] * g[1]) / m.det, (-m.jac[2] * g[0] + m.jac[0] * g[1]) / m.det};
}

// Contravariant Piola transform without the 1/det factor.
std::array<double, 2> piola_numerator(const CellMapping& m, const std::array<double, 2>& v) {
  return {m.jac[0] * v[0] + m.jac[2] * v[1], m.jac[1] * v[0] + m.jac[3] * v[1]};
}

// Reference point of local facet `lf` at parameter t.
std::array<double, 2> facet_point(int lf, double t) {
  switch (lf) {
    case 0: return {t, 0.0};
    case 1: return {1.0, t};
    case 2: return {t, 1.0};
    default: return {0.0, t};
  }
}

SparseOperator from_triplets(int rows, int cols, const Triplets& t) {
  SparseOperator op(rows, cols);
  op.setFromTriplets(t.begin(), t.end());
  op.makeCompressed();
  return op;
}

int num_cells(const DofMap& space) { return static_cast<int>(space.mesh().num_cells()); }

}  // namespace

SparseOperator assemble_pressure_mass(const DofMap& pressure) {
  const PressureElement element(pressure.degree());
  const auto rule = tensor_gauss(pressure.degree() + 2);
  const int n = element.size();
  std::vector<double> phi(n);
  Triplets t;
  Eigen::MatrixXd local(n, n);
  for (int c = 0; c < num_cells(pressure); ++c) {
    local.setZero();
    for (const auto& q : rule.points) {
      element.values(q.xi, q.eta, phi);
      const double w = q.weight * pressure.mesh().map(c, q.xi, q.eta).det;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) local(i, j) += w * phi[i] * phi[j];
      }
    }
    const auto dofs = pressure.cell_dofs(c);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) t.emplace_back(dofs[i], dofs[j], local(i, j));
    }
  }
  return from_triplets(pressure.num_dofs(), pressure.num_dofs(), t);
}

SparseOperator assemble_flux_mass(const DofMap& flux, const Eigen::Matrix2d& permeability) {
  const bool symmetric = std::abs(permeability(0, 1) - permeability(1, 0)) <=
                         1e-14 * (std::abs(permeability(0, 0)) + std::abs(permeability(1, 1)));
  if (!symmetric || permeability(0, 0) <= 0.0 || permeability.determinant() <= 0.0) {
    throw Error(ErrorKind::InvalidMaterial, "permeability tensor must be symmetric positive definite");
  }
  const Eigen::Matrix2d kinv = permeability.inverse();
  const FluxElement element(flux.degree());
  const auto rule = tensor_gauss(flux.degree() + 2);
  const int n = element.size();
  std::vector<std::array<double, 2>> phi(n);
  std::vector<std::array<double, 2>> mapped(n);
  Triplets t;
  Eigen::MatrixXd local(n, n);
  for (int c = 0; c < num_cells(flux); ++c) {
    local.setZero();
    for (const auto& q : rule.points) {
      element.values(q.xi, q.eta, phi);
      const auto m = flux.mesh().map(c, q.xi, q.eta);
      for (int i = 0; i < n; ++i) mapped[i] = piola_numerator(m, phi[i]);
      const double w = q.weight / m.det;
      for (int i = 0; i < n; ++i) {
        const double kx = kinv(0, 0) * mapped[i][0] + kinv(0, 1) * mapped[i][1];
        const double ky = kinv(1, 0) * mapped[i][0] + kinv(1, 1) * mapped[i][1];
        for (int j = 0; j < n; ++j) local(i, j) += w * (kx * mapped[j][0] + ky * mapped[j][1]);
      }
    }
    const auto dofs = flux.cell_dofs(c);
    const auto signs = flux.cell_signs(c);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) t.emplace_back(dofs[i], dofs[j], signs[i] * signs[j] * local(i, j));
    }
  }
  return from_triplets(flux.num_dofs(), flux.num_dofs(), t);
}

SparseOperator assemble_div(const DofMap& flux, const DofMap& pressure) {
  // The Jacobians cancel: div v = div_ref v_ref / det J and dx = det J dxi.
  const FluxElement fe(flux.degree());
  const PressureElement pe(pressure.degree());
  const auto rule = tensor_gauss(std::max(flux.degree(), pressure.degree()) + 2);
  std::vector<double> div(fe.size());
  std::vector<double> phi(pe.size());
  Triplets t;
  Eigen::MatrixXd local(pe.size(), fe.size());
  for (int c = 0; c < num_cells(flux); ++c) {
    local.setZero();
    for (const auto& q : rule.points) {
      fe.divergences(q.xi, q.eta, div);
      pe.values(q.xi, q.eta, phi);
      for (int i = 0; i < pe.size(); ++i) {
        for (int j = 0; j < fe.size(); ++j) local(i, j) += q.weight * phi[i] * div[j];
      }
    }
    const auto pdofs = pressure.cell_dofs(c);
    const auto fdofs = flux.cell_dofs(c);
    const auto signs = flux.cell_signs(c);
    for (int i = 0; i < pe.size(); ++i) {
      for (int j = 0; j < fe.size(); ++j) t.emplace_back(pdofs[i], fdofs[j], signs[j] * local(i, j));
    }
  }
  return from_triplets(pressure.num_dofs(), flux.num_dofs(), t);
}

SparseOperator assemble_elasticity(const DofMap& displacement, double mu, double lambda) {
  const LagrangeElement element(displacement.degree());
  const auto rule = tensor_gauss(displacement.degree() + 1);
  const int n = element.size();
  std::vector<std::array<double, 2>> ref(n);
  std::vector<std::array<double, 2>> grad(n);
  Triplets t;
  Eigen::MatrixXd local(2 * n, 2 * n);
  for (int c = 0; c < num_cells(displacement); ++c) {
    local.setZero();
    for (const auto& q : rule.points) {
      element.gradients(q.xi, q.eta, ref);
      const auto m = displacement.mesh().map(c, q.xi, q.eta);
      for (int i = 0; i < n; ++i) grad[i] = push_gradient(m, ref[i]);
      const double w = q.weight * m.det;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          const double gg = grad[i][0] * grad[j][0] + grad[i][1] * grad[j][1];
          for (int ci = 0; ci < 2; ++ci) {
            for (int cj = 0; cj < 2; ++cj) {
              const double shear = mu * ((ci == cj ? gg : 0.0) + grad[i][cj] * grad[j][ci]);
              const double vol = lambda * grad[i][ci] * grad[j][cj];
              local(2 * i + ci, 2 * j + cj) += w * (shear + vol);
            }
          }
        }
      }
    }
    const auto dofs = displacement.cell_dofs(c);
    for (int i = 0; i < 2 * n; ++i) {
      for (int j = 0; j < 2 * n; ++j) t.emplace_back(dofs[i], dofs[j], local(i, j));
    }
  }
  return from_triplets(displacement.num_dofs(), displacement.num_dofs(), t);
}

SparseOperator assemble_displacement_mass(const DofMap& displacement) {
  const LagrangeElement element(displacement.degree());
  const auto rule = tensor_gauss(displacement.degree() + 2);
  const int n = element.size();
  std::vector<double> phi(n);
  Triplets t;
  Eigen::MatrixXd local(n, n);
  for (int c = 0; c < num_cells(displacement); ++c) {
    local.setZero();
    for (const auto& q : rule.points) {
      element.values(q.xi, q.eta, phi);
      const double w = q.weight * displacement.mesh().map(c, q.xi, q.eta).det;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) local(i, j) += w * phi[i] * phi[j];
      }
    }
    const auto dofs = displacement.cell_dofs(c);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int comp = 0; comp < 2; ++comp) t.emplace_back(dofs[2 * i + comp], dofs[2 * j + comp], local(i, j));
      }
    }
  }
  return from_triplets(displacement.num_dofs(), displacement.num_dofs(), t);
}

SparseOperator assemble_coupling(const DofMap& pressure, const DofMap& displacement, double biot_coefficient) {
  const LagrangeElement le(displacement.degree());
  const PressureElement pe(pressure.degree());
  const auto rule = tensor_gauss(std::max(pressure.degree(), displacement.degree()) + 2);
  std::vector<std::array<double, 2>> ref(le.size());
  std::vector<double> phi(pe.size());
  Triplets t;
  Eigen::MatrixXd local(2 * le.size(), pe.size());
  for (int c = 0; c < num_cells(pressure); ++c) {
    local.setZero();
    for (const auto& q : rule.points) {
      le.gradients(q.xi, q.eta, ref);
      pe.values(q.xi, q.eta, phi);
      const auto m = displacement.mesh().map(c, q.xi, q.eta);
      const double w = q.weight * m.det * biot_coefficient;
      for (int i = 0; i < le.size(); ++i) {
        const auto g = push_gradient(m, ref[i]);
        for (int j = 0; j < pe.size(); ++j) {
          local(2 * i, j) += w * g[0] * phi[j];
          local(2 * i + 1, j) += w * g[1] * phi[j];
        }
      }
    }
    const auto ddofs = displacement.cell_dofs(c);
    const auto pdofs = pressure.cell_dofs(c);
    for (int i = 0; i < 2 * le.size(); ++i) {
      for (int j = 0; j < pe.size(); ++j) t.emplace_back(ddofs[i], pdofs[j], local(i, j));
    }
  }
  return from_triplets(displacement.num_dofs(), pressure.num_dofs(), t);
}

Eigen::VectorXd assemble_pressure_source(const DofMap& pressure, const ScalarField& source, double t,
                                         int quadrature_points) {
  const PressureElement element(pressure.degree());
  const auto rule = tensor_gauss(quadrature_points > 0 ? quadrature_points : pressure.degree() + 2);
  std::vector<double> phi(element.size());
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(pressure.num_dofs());
  for (int c = 0; c < num_cells(pressure); ++c) {
    const auto dofs = pressure.cell_dofs(c);
    for (const auto& q : rule.points) {
      element.values(q.xi, q.eta, phi);
      const auto m = pressure.mesh().map(c, q.xi, q.eta);
      const double fw = source(m.x, t) * q.weight * m.det;
      for (int i = 0; i < element.size(); ++i) rhs(dofs[i]) += fw * phi[i];
    }
  }
  return rhs;
}

Eigen::VectorXd assemble_body_force(const DofMap& displacement, const VectorField& force, double t,
                                    int quadrature_points) {
  const LagrangeElement element(displacement.degree());
  const auto rule = tensor_gauss(quadrature_points > 0 ? quadrature_points : displacement.degree() + 1);
  std::vector<double> phi(element.size());
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(displacement.num_dofs());
  for (int c = 0; c < num_cells(displacement); ++c) {
    const auto dofs = displacement.cell_dofs(c);
    for (const auto& q : rule.points) {
      element.values(q.xi, q.eta, phi);
      const auto m = displacement.mesh().map(c, q.xi, q.eta);
      const auto f = force(m.x, t);
      const double w = q.weight * m.det;
      for (int i = 0; i < element.size(); ++i) {
        rhs(dofs[2 * i]) += w * f[0] * phi[i];
        rhs(dofs[2 * i + 1]) += w * f[1] * phi[i];
      }
    }
  }
  return rhs;
}

Eigen::VectorXd assemble_traction(const DofMap& displacement, const std::set<BoundaryTag>& tagged,
                                  const VectorField& traction, double t) {
  const Mesh& mesh = displacement.mesh();
  const LagrangeElement element(displacement.degree());
  const auto rule = gauss_nodes(displacement.degree() + 2);
  std::vector<double> phi(element.size());
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(displacement.num_dofs());
  for (int f = 0; f < static_cast<int>(mesh.num_facets()); ++f) {
    const Facet& facet = mesh.facets()[f];
    if (!facet.is_boundary() || !tagged.contains(mesh.boundary_tag(f))) continue;
    const int c = facet.cells[0];
    const int lf = facet.local_index[0];
    const double length = mesh.facet_length(f);
    const auto dofs = displacement.cell_dofs(c);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto ref = facet_point(lf, rule.nodes[q]);
      element.values(ref[0], ref[1], phi);
      const auto g = traction(mesh.map(c, ref[0], ref[1]).x, t);
      const double w = rule.weights[q] * length;
      for (int i = 0; i < element.size(); ++i) {
        rhs(dofs[2 * i]) += w * g[0] * phi[i];
        rhs(dofs[2 * i + 1]) += w * g[1] * phi[i];
      }
    }
  }
  return rhs;
}

Eigen::VectorXd assemble_pressure_boundary(const DofMap& flux, const std::set<BoundaryTag>& tagged,
                                           const ScalarField& boundary_pressure, double t) {
  const Mesh& mesh = flux.mesh();
  const FluxElement element(flux.degree());
  const int m = element.facet_dofs();
  const auto rule = gauss_nodes(flux.degree() + 2);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(flux.num_dofs());
  for (int f = 0; f < static_cast<int>(mesh.num_facets()); ++f) {
    const Facet& facet = mesh.facets()[f];
    if (!facet.is_boundary() || !tagged.contains(mesh.boundary_tag(f))) continue;
    const int c = facet.cells[0];
    const int lf = facet.local_index[0];
    const auto dofs = flux.cell_dofs(c);
    const auto signs = flux.cell_signs(c);
    // v.n ds equals the reference normal flux dt under the Piola map.
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto ref = facet_point(lf, rule.nodes[q]);
      const double p = boundary_pressure(mesh.map(c, ref[0], ref[1]).x, t);
      for (int k = 0; k < m; ++k) {
        const int local = lf * m + k;
        rhs(dofs[local]) -= rule.weights[q] * p * element.facet_trace(k, rule.nodes[q]) * signs[local];
      }
    }
  }
  return rhs;
}

SparseOperator restrict_operator(const SparseOperator& op, const DofMap& rows, const DofMap& cols) {
  Triplets t;
  t.reserve(op.nonZeros());
  for (int k = 0; k < op.outerSize(); ++k) {
    const int cf = cols.free_index(k);
    if (cf < 0) continue;
    for (SparseOperator::InnerIterator it(op, k); it; ++it) {
      const int rf = rows.free_index(static_cast<int>(it.row()));
      if (rf >= 0) t.emplace_back(rf, cf, it.value());
    }
  }
  return from_triplets(rows.num_free(), cols.num_free(), t);
}

}  // namespace porosplit
