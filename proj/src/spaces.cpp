#include "porosplit/spaces.hpp"

#include <algorithm>

#include "porosplit/error.hpp"

namespace porosplit {

namespace {

void check_tags_exist(const Mesh& mesh, const std::vector<BoundaryTag>& requested) {
  const auto present = mesh.boundary_tags();
  for (const auto& tag : requested) {
    if (!std::binary_search(present.begin(), present.end(), tag)) {
      throw Error(ErrorKind::InvalidBoundarySpec, "boundary tag '" + tag.label + "' does not occur on the mesh");
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Reference elements

PressureElement::PressureElement(int degree) : degree_(degree), basis_(gauss_nodes(degree + 1).nodes) {}

void PressureElement::values(double xi, double eta, std::span<double> out) const {
  const int n = degree_ + 1;
  for (int b = 0; b < n; ++b) {
    const double vb = basis_.value(b, eta);
    for (int a = 0; a < n; ++a) out[b * n + a] = basis_.value(a, xi) * vb;
  }
}

FluxElement::FluxElement(int degree)
    : degree_(degree), normal_(gauss_nodes(degree + 1).nodes), tangential_(gauss_lobatto_points(degree + 2)) {}

void FluxElement::values(double xi, double eta, std::span<std::array<double, 2>> out) const {
  const int s = degree_;
  const int m = s + 1;
  int idx = 0;
  // facet 0 (bottom): -(0, l_k(xi) L_0(eta))
  for (int k = 0; k < m; ++k) out[idx++] = {0.0, -normal_.value(k, xi) * tangential_.value(0, eta)};
  // facet 1 (right): (L_{s+1}(xi) l_k(eta), 0)
  for (int k = 0; k < m; ++k) out[idx++] = {tangential_.value(s + 1, xi) * normal_.value(k, eta), 0.0};
  // facet 2 (top): (0, l_k(xi) L_{s+1}(eta))
  for (int k = 0; k < m; ++k) out[idx++] = {0.0, normal_.value(k, xi) * tangential_.value(s + 1, eta)};
  // facet 3 (left): -(L_0(xi) l_k(eta), 0)
  for (int k = 0; k < m; ++k) out[idx++] = {-tangential_.value(0, xi) * normal_.value(k, eta), 0.0};
  for (int a = 1; a <= s; ++a) {
    for (int k = 0; k < m; ++k) out[idx++] = {tangential_.value(a, xi) * normal_.value(k, eta), 0.0};
  }
  for (int a = 1; a <= s; ++a) {
    for (int k = 0; k < m; ++k) out[idx++] = {0.0, normal_.value(k, xi) * tangential_.value(a, eta)};
  }
}

void FluxElement::divergences(double xi, double eta, std::span<double> out) const {
  const int s = degree_;
  const int m = s + 1;
  int idx = 0;
  for (int k = 0; k < m; ++k) out[idx++] = -normal_.value(k, xi) * tangential_.derivative(0, eta);
  for (int k = 0; k < m; ++k) out[idx++] = tangential_.derivative(s + 1, xi) * normal_.value(k, eta);
  for (int k = 0; k < m; ++k) out[idx++] = normal_.value(k, xi) * tangential_.derivative(s + 1, eta);
  for (int k = 0; k < m; ++k) out[idx++] = -tangential_.derivative(0, xi) * normal_.value(k, eta);
  for (int a = 1; a <= s; ++a) {
    for (int k = 0; k < m; ++k) out[idx++] = tangential_.derivative(a, xi) * normal_.value(k, eta);
  }
  for (int a = 1; a <= s; ++a) {
    for (int k = 0; k < m; ++k) out[idx++] = normal_.value(k, xi) * tangential_.derivative(a, eta);
  }
}

LagrangeElement::LagrangeElement(int degree) : degree_(degree), basis_(gauss_lobatto_points(degree + 1)) {
  if (degree < 1) throw Error(ErrorKind::InvalidOrder, "continuous Lagrange element needs degree >= 1");
}

void LagrangeElement::values(double xi, double eta, std::span<double> out) const {
  const int n = degree_ + 1;
  for (int b = 0; b < n; ++b) {
    const double vb = basis_.value(b, eta);
    for (int a = 0; a < n; ++a) out[b * n + a] = basis_.value(a, xi) * vb;
  }
}

void LagrangeElement::gradients(double xi, double eta, std::span<std::array<double, 2>> out) const {
  const int n = degree_ + 1;
  for (int b = 0; b < n; ++b) {
    const double vb = basis_.value(b, eta);
    const double db = basis_.derivative(b, eta);
    for (int a = 0; a < n; ++a) out[b * n + a] = {basis_.derivative(a, xi) * vb, basis_.value(a, xi) * db};
  }
}

// ---------------------------------------------------------------------------
// DofMap

DofMap::DofMap(std::shared_ptr<const Mesh> mesh, SpaceKind kind, int degree, int num_dofs, int dofs_per_cell,
               std::vector<int> cell_dofs, std::vector<double> cell_signs, std::vector<bool> constrained)
    : mesh_(std::move(mesh)),
      kind_(kind),
      degree_(degree),
      num_dofs_(num_dofs),
      dofs_per_cell_(dofs_per_cell),
      cell_dofs_(std::move(cell_dofs)),
      cell_signs_(std::move(cell_signs)),
      constrained_(std::move(constrained)),
      free_index_(num_dofs, -1) {
  for (int d = 0; d < num_dofs_; ++d) {
    if (!constrained_[d]) {
      free_index_[d] = num_free_++;
      free_dofs_.push_back(d);
    }
  }
}

Eigen::VectorXd DofMap::restrict_to_free(const Eigen::VectorXd& full) const {
  Eigen::VectorXd out(num_free_);
  for (int i = 0; i < num_free_; ++i) out(i) = full(free_dofs_[i]);
  return out;
}

Eigen::VectorXd DofMap::extend_from_free(const Eigen::VectorXd& free) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(num_dofs_);
  for (int i = 0; i < num_free_; ++i) out(free_dofs_[i]) = free(i);
  return out;
}

DofMap build_pressure_space(std::shared_ptr<const Mesh> mesh, int s) {
  if (s < 0) throw Error(ErrorKind::InvalidOrder, "pressure degree must be >= 0");
  const int per_cell = (s + 1) * (s + 1);
  const int n_cells = static_cast<int>(mesh->num_cells());
  std::vector<int> dofs(static_cast<std::size_t>(n_cells) * per_cell);
  for (std::size_t i = 0; i < dofs.size(); ++i) dofs[i] = static_cast<int>(i);
  std::vector<double> signs(dofs.size(), 1.0);
  const int n = n_cells * per_cell;
  return DofMap(std::move(mesh), SpaceKind::Pressure, s, n, per_cell, std::move(dofs), std::move(signs),
                std::vector<bool>(n, false));
}

DofMap build_flux_space(std::shared_ptr<const Mesh> mesh, int s, const std::set<BoundaryTag>& essential) {
  if (s < 0) throw Error(ErrorKind::InvalidOrder, "flux degree must be >= 0");
  check_tags_exist(*mesh, {essential.begin(), essential.end()});
  const FluxElement element(s);
  const int m = s + 1;
  const int per_cell = element.size();
  const int interior = per_cell - 4 * m;
  const int n_facets = static_cast<int>(mesh->num_facets());
  const int n_cells = static_cast<int>(mesh->num_cells());
  const int n = n_facets * m + n_cells * interior;

  std::vector<int> dofs(static_cast<std::size_t>(n_cells) * per_cell);
  std::vector<double> signs(dofs.size(), 1.0);
  for (int c = 0; c < n_cells; ++c) {
    const auto& cf = mesh->cell_facets(c);
    for (int lf = 0; lf < 4; ++lf) {
      const Facet& facet = mesh->facets()[cf[lf]];
      const bool aligned = mesh->local_facet_vertices(c, lf)[0] == facet.vertices[0];
      const double sign = facet.cells[0] == c ? 1.0 : -1.0;
      for (int k = 0; k < m; ++k) {
        const std::size_t local = static_cast<std::size_t>(c) * per_cell + lf * m + k;
        dofs[local] = cf[lf] * m + (aligned ? k : s - k);
        signs[local] = sign;
      }
    }
    for (int i = 0; i < interior; ++i) {
      dofs[static_cast<std::size_t>(c) * per_cell + 4 * m + i] = n_facets * m + c * interior + i;
    }
  }

  std::vector<bool> constrained(n, false);
  for (int f = 0; f < n_facets; ++f) {
    if (mesh->facets()[f].is_boundary() && essential.contains(mesh->boundary_tag(f))) {
      for (int k = 0; k < m; ++k) constrained[f * m + k] = true;
    }
  }
  return DofMap(std::move(mesh), SpaceKind::Flux, s, n, per_cell, std::move(dofs), std::move(signs),
                std::move(constrained));
}

DofMap build_displacement_space(std::shared_ptr<const Mesh> mesh, int degree,
                                const DisplacementConstraints& fixed) {
  if (degree < 1) throw Error(ErrorKind::InvalidOrder, "displacement degree must be >= 1");
  {
    std::vector<BoundaryTag> requested;
    for (const auto& [tag, comps] : fixed) requested.push_back(tag);
    check_tags_exist(*mesh, requested);
  }
  const int l = degree;
  const int per_edge = l - 1;
  const int per_interior = (l - 1) * (l - 1);
  const int nv = static_cast<int>(mesh->num_vertices());
  const int nf = static_cast<int>(mesh->num_facets());
  const int nc = static_cast<int>(mesh->num_cells());
  const int n_nodes = nv + nf * per_edge + nc * per_interior;
  const int nodes_per_cell = (l + 1) * (l + 1);

  auto facet_node = [&](int c, int lf, int pos) {  // pos in 1..l-1 along the local parametrization
    const int f = mesh->cell_facets(c)[lf];
    const bool aligned = mesh->local_facet_vertices(c, lf)[0] == mesh->facets()[f].vertices[0];
    const int t = aligned ? pos - 1 : per_edge - pos;
    return nv + f * per_edge + t;
  };

  std::vector<int> dofs(static_cast<std::size_t>(nc) * nodes_per_cell * 2);
  for (int c = 0; c < nc; ++c) {
    const auto& cv = mesh->cells()[c];
    for (int b = 0; b <= l; ++b) {
      for (int a = 0; a <= l; ++a) {
        int node = -1;
        if (a == 0 && b == 0) node = cv[0];
        else if (a == l && b == 0) node = cv[1];
        else if (a == l && b == l) node = cv[2];
        else if (a == 0 && b == l) node = cv[3];
        else if (b == 0) node = facet_node(c, 0, a);
        else if (a == l) node = facet_node(c, 1, b);
        else if (b == l) node = facet_node(c, 2, a);
        else if (a == 0) node = facet_node(c, 3, b);
        else node = nv + nf * per_edge + c * per_interior + (b - 1) * (l - 1) + (a - 1);
        const std::size_t local = static_cast<std::size_t>(c) * nodes_per_cell * 2 + 2 * (b * (l + 1) + a);
        dofs[local] = 2 * node;
        dofs[local + 1] = 2 * node + 1;
      }
    }
  }

  std::vector<bool> constrained(2 * n_nodes, false);
  for (int f = 0; f < nf; ++f) {
    const Facet& facet = mesh->facets()[f];
    if (!facet.is_boundary()) continue;
    auto it = fixed.find(mesh->boundary_tag(f));
    if (it == fixed.end()) continue;
    for (int comp = 0; comp < 2; ++comp) {
      if (!it->second[comp]) continue;
      constrained[2 * facet.vertices[0] + comp] = true;
      constrained[2 * facet.vertices[1] + comp] = true;
      for (int t = 0; t < per_edge; ++t) constrained[2 * (nv + f * per_edge + t) + comp] = true;
    }
  }
  std::vector<double> signs(dofs.size(), 1.0);
  return DofMap(std::move(mesh), SpaceKind::Displacement, degree, 2 * n_nodes, 2 * nodes_per_cell,
                std::move(dofs), std::move(signs), std::move(constrained));
}

std::vector<Point2> displacement_node_coordinates(const DofMap& space) {
  const Mesh& mesh = space.mesh();
  const LagrangeElement element(space.degree());
  const auto nodes = element.nodes_1d();
  const int l = space.degree();
  std::vector<Point2> coords(space.num_dofs() / 2);
  for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) {
    const auto dofs = space.cell_dofs(c);
    for (int b = 0; b <= l; ++b) {
      for (int a = 0; a <= l; ++a) {
        coords[dofs[2 * (b * (l + 1) + a)] / 2] = mesh.map(c, nodes[a], nodes[b]).x;
      }
    }
  }
  return coords;
}

double evaluate_pressure(const DofMap& space, const Eigen::VectorXd& coeffs, int cell, double xi, double eta) {
  const PressureElement element(space.degree());
  std::vector<double> phi(element.size());
  element.values(xi, eta, phi);
  const auto dofs = space.cell_dofs(cell);
  double v = 0.0;
  for (int i = 0; i < element.size(); ++i) v += coeffs(dofs[i]) * phi[i];
  return v;
}

std::array<double, 2> evaluate_flux(const DofMap& space, const Eigen::VectorXd& coeffs, int cell, double xi,
                                    double eta) {
  const FluxElement element(space.degree());
  std::vector<std::array<double, 2>> phi(element.size());
  element.values(xi, eta, phi);
  const auto dofs = space.cell_dofs(cell);
  const auto signs = space.cell_signs(cell);
  double rx = 0.0;
  double ry = 0.0;
  for (int i = 0; i < element.size(); ++i) {
    const double c = coeffs(dofs[i]) * signs[i];
    rx += c * phi[i][0];
    ry += c * phi[i][1];
  }
  const auto m = space.mesh().map(cell, xi, eta);
  return {(m.jac[0] * rx + m.jac[2] * ry) / m.det, (m.jac[1] * rx + m.jac[3] * ry) / m.det};
}

double evaluate_flux_divergence(const DofMap& space, const Eigen::VectorXd& coeffs, int cell, double xi,
                                double eta) {
  const FluxElement element(space.degree());
  std::vector<double> div(element.size());
  element.divergences(xi, eta, div);
  const auto dofs = space.cell_dofs(cell);
  const auto signs = space.cell_signs(cell);
  double v = 0.0;
  for (int i = 0; i < element.size(); ++i) v += coeffs(dofs[i]) * signs[i] * div[i];
  return v / space.mesh().map(cell, xi, eta).det;
}

std::array<double, 2> evaluate_displacement(const DofMap& space, const Eigen::VectorXd& coeffs, int cell,
                                            double xi, double eta) {
  const LagrangeElement element(space.degree());
  std::vector<double> phi(element.size());
  element.values(xi, eta, phi);
  const auto dofs = space.cell_dofs(cell);
  std::array<double, 2> u{0.0, 0.0};
  for (int i = 0; i < element.size(); ++i) {
    u[0] += coeffs(dofs[2 * i]) * phi[i];
    u[1] += coeffs(dofs[2 * i + 1]) * phi[i];
  }
  return u;
}

}  // namespace porosplit
