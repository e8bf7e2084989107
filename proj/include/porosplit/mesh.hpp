#pragma once

#include <array>
#include <compare>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace porosplit {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Label attached to a boundary facet. The scenario decides what a label
/// means for flow and mechanics; the mesh only carries it.
struct BoundaryTag {
  std::string label;

  auto operator<=>(const BoundaryTag&) const = default;
};

namespace tags {
inline const BoundaryTag kDefault{"Default"};
inline const BoundaryTag kNoFlow{"NoFlow"};
inline const BoundaryTag kOpenFlow{"OpenFlow"};
inline const BoundaryTag kTractionTop{"TractionTop"};
inline const BoundaryTag kTractionFree{"TractionFree"};
inline const BoundaryTag kSymmetryX{"SymmetryX"};
inline const BoundaryTag kSymmetryY{"SymmetryY"};
}  // namespace tags

/// Edge shared by one (boundary) or two (interior) cells. `vertices` are
/// stored with the smaller index first; this fixes the global
/// parametrization direction of the facet.
struct Facet {
  std::array<int, 2> vertices{};
  std::array<int, 2> cells{-1, -1};
  std::array<int, 2> local_index{-1, -1};

  bool is_boundary() const { return cells[1] < 0; }
};

/// Affine-or-bilinear map of the reference square onto a cell, evaluated
/// at one reference point.
struct CellMapping {
  Point2 x;
  // Column-major Jacobian: jac[0] = dx/dxi, jac[1] = dy/dxi,
  // jac[2] = dx/deta, jac[3] = dy/deta.
  std::array<double, 4> jac{};
  double det = 0.0;
};

/// Conforming quadrilateral mesh. Cells list their vertices
/// counterclockwise starting from the reference corner (0,0). Local facet
/// numbering: 0 bottom (v0,v1), 1 right (v1,v2), 2 top (v3,v2), 3 left
/// (v0,v3); each local facet is parametrized from its first to its second
/// listed vertex.
class Mesh {
 public:
  using Cell = std::array<int, 4>;
  /// Called once per boundary facet with its (sorted) vertex ids.
  using Tagger = std::function<BoundaryTag(std::array<int, 2> facet, std::span<const Point2> vertices)>;

  Mesh(std::vector<Point2> vertices, std::vector<Cell> cells, const Tagger& tagger);

  const std::vector<Point2>& vertices() const { return vertices_; }
  const std::vector<Cell>& cells() const { return cells_; }
  const std::vector<Facet>& facets() const { return facets_; }
  const std::array<int, 4>& cell_facets(int cell) const { return cell_facets_[cell]; }
  const BoundaryTag& boundary_tag(int facet) const { return tags_[facet]; }

  std::size_t num_cells() const { return cells_.size(); }
  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_facets() const { return facets_.size(); }
  std::size_t num_boundary_facets() const;

  /// Distinct tags present on the boundary, sorted.
  std::vector<BoundaryTag> boundary_tags() const;

  CellMapping map(int cell, double xi, double eta) const;
  double cell_area(int cell) const;
  double total_area() const;
  double facet_length(int facet) const;
  /// Largest facet length.
  double mesh_size() const;

  /// Global vertex ids of the start/end of local facet `local` of `cell`.
  std::array<int, 2> local_facet_vertices(int cell, int local) const;

 private:
  std::vector<Point2> vertices_;
  std::vector<Cell> cells_;
  std::vector<Facet> facets_;
  std::vector<std::array<int, 4>> cell_facets_;
  std::vector<BoundaryTag> tags_;
};

struct Rectangle {
  double x0 = 0.0;
  double x1 = 1.0;
  double y0 = 0.0;
  double y1 = 1.0;
};

struct RectangleTags {
  BoundaryTag bottom = tags::kDefault;
  BoundaryTag right = tags::kDefault;
  BoundaryTag top = tags::kDefault;
  BoundaryTag left = tags::kDefault;
};

Mesh build_rectangle_mesh(const Rectangle& extent, int nx, int ny, const RectangleTags& side_tags = {});

/// L-shaped benchmark domain: the unit square without its lower-right
/// quarter, uniform cells of size 2^-(level+1).
Mesh build_lshape_mesh(int level);

/// Boundary label of the L-shaped domain for the facet with endpoints a, b.
BoundaryTag lshape_boundary_tag(const Point2& a, const Point2& b);

Mesh refine_uniform(const Mesh& mesh);

/// Plain-text dump for debugging: `cells=<n> vertices=<m>` followed by the
/// vertex and connectivity blocks.
void write_mesh_text(std::ostream& os, const Mesh& mesh);

}  // namespace porosplit
