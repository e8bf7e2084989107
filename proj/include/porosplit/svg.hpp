#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <vector>

#include "porosplit/mesh.hpp"
#include "porosplit/spaces.hpp"

namespace porosplit {

/// One pseudocolor panel: a value per cell.
struct FieldPanel {
  std::string title;
  std::vector<double> cell_values;
};

/// Side-by-side panels with axes and a colorbar each.
void write_field_svg(std::ostream& os, const Mesh& mesh, const std::vector<FieldPanel>& panels,
                     const std::string& caption);

/// Pressure at every cell centre.
std::vector<double> cell_pressure(const DofMap& pressure, const Eigen::VectorXd& p);
/// |u| at every cell centre.
std::vector<double> cell_displacement_magnitude(const DofMap& displacement, const Eigen::VectorXd& u);

}  // namespace porosplit
