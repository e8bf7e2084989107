#include "porosplit/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <set>

#include "porosplit/error.hpp"
#include "porosplit/quadrature.hpp"

namespace porosplit {

namespace {

constexpr std::array<std::array<int, 2>, 4> kLocalFacetCorners{{{0, 1}, {1, 2}, {3, 2}, {0, 3}}};

std::pair<int, int> sorted_pair(int a, int b) { return a < b ? std::pair{a, b} : std::pair{b, a}; }

}  // namespace

Mesh::Mesh(std::vector<Point2> vertices, std::vector<Cell> cells, const Tagger& tagger)
    : vertices_(std::move(vertices)), cells_(std::move(cells)) {
  if (cells_.empty()) throw Error(ErrorKind::InvalidGeometry, "mesh has no cells");
  for (const auto& c : cells_) {
    for (int v : c) {
      if (v < 0 || static_cast<std::size_t>(v) >= vertices_.size()) {
        throw Error(ErrorKind::InvalidGeometry, "cell references a nonexistent vertex");
      }
    }
  }

  std::map<std::pair<int, int>, int> lookup;
  cell_facets_.resize(cells_.size());
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    for (int lf = 0; lf < 4; ++lf) {
      const int a = cells_[c][kLocalFacetCorners[lf][0]];
      const int b = cells_[c][kLocalFacetCorners[lf][1]];
      const auto key = sorted_pair(a, b);
      auto [it, inserted] = lookup.try_emplace(key, static_cast<int>(facets_.size()));
      if (inserted) {
        Facet f;
        f.vertices = {key.first, key.second};
        f.cells[0] = static_cast<int>(c);
        f.local_index[0] = lf;
        facets_.push_back(f);
      } else {
        Facet& f = facets_[it->second];
        if (f.cells[1] >= 0) {
          throw Error(ErrorKind::InvalidGeometry, "facet shared by more than two cells");
        }
        f.cells[1] = static_cast<int>(c);
        f.local_index[1] = lf;
      }
      cell_facets_[c][lf] = it->second;
    }
  }

  tags_.resize(facets_.size());
  for (std::size_t f = 0; f < facets_.size(); ++f) {
    if (facets_[f].is_boundary()) {
      tags_[f] = tagger(facets_[f].vertices, vertices_);
      if (tags_[f].label.empty()) {
        throw Error(ErrorKind::InvalidBoundarySpec, "boundary facet left without a tag");
      }
    }
  }

  const auto rule = tensor_gauss(4);
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    for (const auto& q : rule.points) {
      if (map(static_cast<int>(c), q.xi, q.eta).det <= 0.0) {
        throw Error(ErrorKind::InvalidGeometry,
                    "cell " + std::to_string(c) + " has a non-positive Jacobian");
      }
    }
  }
}

std::size_t Mesh::num_boundary_facets() const {
  return static_cast<std::size_t>(
      std::count_if(facets_.begin(), facets_.end(), [](const Facet& f) { return f.is_boundary(); }));
}

std::vector<BoundaryTag> Mesh::boundary_tags() const {
  std::set<BoundaryTag> seen;
  for (std::size_t f = 0; f < facets_.size(); ++f) {
    if (facets_[f].is_boundary()) seen.insert(tags_[f]);
  }
  return {seen.begin(), seen.end()};
}

CellMapping Mesh::map(int cell, double xi, double eta) const {
  const auto& c = cells_[cell];
  const Point2& p0 = vertices_[c[0]];
  const Point2& p1 = vertices_[c[1]];
  const Point2& p2 = vertices_[c[2]];
  const Point2& p3 = vertices_[c[3]];
  const double n0 = (1 - xi) * (1 - eta);
  const double n1 = xi * (1 - eta);
  const double n2 = xi * eta;
  const double n3 = (1 - xi) * eta;
  CellMapping m;
  m.x = {n0 * p0.x + n1 * p1.x + n2 * p2.x + n3 * p3.x, n0 * p0.y + n1 * p1.y + n2 * p2.y + n3 * p3.y};
  m.jac[0] = (1 - eta) * (p1.x - p0.x) + eta * (p2.x - p3.x);
  m.jac[1] = (1 - eta) * (p1.y - p0.y) + eta * (p2.y - p3.y);
  m.jac[2] = (1 - xi) * (p3.x - p0.x) + xi * (p2.x - p1.x);
  m.jac[3] = (1 - xi) * (p3.y - p0.y) + xi * (p2.y - p1.y);
  m.det = m.jac[0] * m.jac[3] - m.jac[2] * m.jac[1];
  return m;
}

double Mesh::cell_area(int cell) const {
  // det J is linear in each reference variable, so the 2-point rule is exact.
  double area = 0.0;
  for (const auto& q : tensor_gauss(2).points) area += q.weight * map(cell, q.xi, q.eta).det;
  return area;
}

double Mesh::total_area() const {
  double a = 0.0;
  for (std::size_t c = 0; c < cells_.size(); ++c) a += cell_area(static_cast<int>(c));
  return a;
}

double Mesh::facet_length(int facet) const {
  const Point2& a = vertices_[facets_[facet].vertices[0]];
  const Point2& b = vertices_[facets_[facet].vertices[1]];
  return std::hypot(b.x - a.x, b.y - a.y);
}

double Mesh::mesh_size() const {
  double h = 0.0;
  for (std::size_t f = 0; f < facets_.size(); ++f) h = std::max(h, facet_length(static_cast<int>(f)));
  return h;
}

std::array<int, 2> Mesh::local_facet_vertices(int cell, int local) const {
  return {cells_[cell][kLocalFacetCorners[local][0]], cells_[cell][kLocalFacetCorners[local][1]]};
}

Mesh build_rectangle_mesh(const Rectangle& extent, int nx, int ny, const RectangleTags& side_tags) {
  if (nx < 1 || ny < 1) throw Error(ErrorKind::InvalidGeometry, "subdivisions must be >= 1");
  if (!(extent.x1 > extent.x0) || !(extent.y1 > extent.y0)) {
    throw Error(ErrorKind::InvalidGeometry, "degenerate rectangle extent");
  }
  std::vector<Point2> verts;
  verts.reserve(static_cast<std::size_t>(nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      verts.push_back({extent.x0 + (extent.x1 - extent.x0) * i / nx, extent.y0 + (extent.y1 - extent.y0) * j / ny});
    }
  }
  // Snap the outer ring to the exact extent so that side classification
  // below is exact.
  for (int j = 0; j <= ny; ++j) {
    verts[j * (nx + 1)].x = extent.x0;
    verts[j * (nx + 1) + nx].x = extent.x1;
  }
  for (int i = 0; i <= nx; ++i) {
    verts[i].y = extent.y0;
    verts[ny * (nx + 1) + i].y = extent.y1;
  }
  std::vector<Mesh::Cell> cells;
  cells.reserve(static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int v0 = j * (nx + 1) + i;
      cells.push_back({v0, v0 + 1, v0 + nx + 2, v0 + nx + 1});
    }
  }
  auto tagger = [extent, side_tags](std::array<int, 2> f, std::span<const Point2> v) -> BoundaryTag {
    const Point2& a = v[f[0]];
    const Point2& b = v[f[1]];
    if (a.y == extent.y0 && b.y == extent.y0) return side_tags.bottom;
    if (a.y == extent.y1 && b.y == extent.y1) return side_tags.top;
    if (a.x == extent.x0 && b.x == extent.x0) return side_tags.left;
    if (a.x == extent.x1 && b.x == extent.x1) return side_tags.right;
    return {};
  };
  return Mesh(std::move(verts), std::move(cells), tagger);
}

BoundaryTag lshape_boundary_tag(const Point2& a, const Point2& b) {
  const double mx = 0.5 * (a.x + b.x);
  const double my = 0.5 * (a.y + b.y);
  const bool horizontal = a.y == b.y;
  const bool vertical = a.x == b.x;
  if (horizontal && my == 1.0) return tags::kTractionTop;
  if (vertical && mx == 0.0) return tags::kSymmetryX;
  if (horizontal && my == 0.0) return tags::kSymmetryY;
  if (vertical && mx == 1.0) return tags::kSymmetryX;
  // Re-entrant edges bounding the removed lower-right quarter.
  if ((vertical && mx == 0.5 && my < 0.5) || (horizontal && my == 0.5 && mx > 0.5)) {
    return tags::kTractionFree;
  }
  return {};
}

Mesh build_lshape_mesh(int level) {
  if (level < 1) throw Error(ErrorKind::InvalidGeometry, "L-shape refinement level must be >= 1");
  const int n = 2 * (1 << level);  // cells per unit length, h = 1/n
  auto keep = [n](int i, int j) { return !(2 * i >= n && 2 * j < n); };

  std::vector<int> vertex_id(static_cast<std::size_t>(n + 1) * (n + 1), -1);
  std::vector<Point2> verts;
  std::vector<Mesh::Cell> cells;
  auto vid = [&](int i, int j) {
    int& id = vertex_id[static_cast<std::size_t>(j) * (n + 1) + i];
    if (id < 0) {
      id = static_cast<int>(verts.size());
      verts.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n});
    }
    return id;
  };
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (!keep(i, j)) continue;
      cells.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)});
    }
  }
  return Mesh(std::move(verts), std::move(cells), [](std::array<int, 2> f, std::span<const Point2> v) {
    return lshape_boundary_tag(v[f[0]], v[f[1]]);
  });
}

Mesh refine_uniform(const Mesh& mesh) {
  std::vector<Point2> verts = mesh.vertices();
  const auto& facets = mesh.facets();
  std::vector<int> facet_mid(facets.size());
  std::map<std::pair<int, int>, BoundaryTag> child_tags;
  for (std::size_t f = 0; f < facets.size(); ++f) {
    const Point2& a = verts[facets[f].vertices[0]];
    const Point2& b = verts[facets[f].vertices[1]];
    facet_mid[f] = static_cast<int>(verts.size());
    verts.push_back({0.5 * (a.x + b.x), 0.5 * (a.y + b.y)});
    if (facets[f].is_boundary()) {
      const auto& tag = mesh.boundary_tag(static_cast<int>(f));
      child_tags[sorted_pair(facets[f].vertices[0], facet_mid[f])] = tag;
      child_tags[sorted_pair(facets[f].vertices[1], facet_mid[f])] = tag;
    }
  }
  std::vector<Mesh::Cell> cells;
  cells.reserve(4 * mesh.num_cells());
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const auto& cv = mesh.cells()[c];
    const auto& cf = mesh.cell_facets(static_cast<int>(c));
    const int center = static_cast<int>(verts.size());
    verts.push_back(mesh.map(static_cast<int>(c), 0.5, 0.5).x);
    const int mb = facet_mid[cf[0]];
    const int mr = facet_mid[cf[1]];
    const int mt = facet_mid[cf[2]];
    const int ml = facet_mid[cf[3]];
    cells.push_back({cv[0], mb, center, ml});
    cells.push_back({mb, cv[1], mr, center});
    cells.push_back({center, mr, cv[2], mt});
    cells.push_back({ml, center, mt, cv[3]});
  }
  auto tagger = [&child_tags](std::array<int, 2> f, std::span<const Point2>) -> BoundaryTag {
    auto it = child_tags.find(sorted_pair(f[0], f[1]));
    return it == child_tags.end() ? BoundaryTag{} : it->second;
  };
  return Mesh(std::move(verts), std::move(cells), tagger);
}

void write_mesh_text(std::ostream& os, const Mesh& mesh) {
  os << "cells=" << mesh.num_cells() << " vertices=" << mesh.num_vertices() << "\n";
  os << "vertices\n";
  for (const auto& v : mesh.vertices()) os << v.x << " " << v.y << "\n";
  os << "cells\n";
  for (const auto& c : mesh.cells()) os << c[0] << " " << c[1] << " " << c[2] << " " << c[3] << "\n";
  os << "boundary\n";
  for (std::size_t f = 0; f < mesh.num_facets(); ++f) {
    const auto& facet = mesh.facets()[f];
    if (facet.is_boundary()) {
      os << facet.vertices[0] << " " << facet.vertices[1] << " " << mesh.boundary_tag(static_cast<int>(f)).label
         << "\n";
    }
  }
}

}  // namespace porosplit
