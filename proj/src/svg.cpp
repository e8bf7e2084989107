#include "porosplit/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>

#include "porosplit/error.hpp"
#include "porosplit/format.hpp"

namespace porosplit {

namespace {

constexpr double kPlot = 300.0;  // plot area edge, px
constexpr double kMarginLeft = 50.0;
constexpr double kMarginTop = 40.0;
constexpr double kPanelWidth = kMarginLeft + kPlot + 90.0;
constexpr double kHeight = kMarginTop + kPlot + 60.0;

// Perceptually ordered dark-blue -> teal -> green -> yellow ramp.
std::string color(double s) {
  static constexpr std::array<std::array<double, 3>, 5> stops{{{68, 1, 84}, {59, 82, 139}, {33, 145, 140},
                                                               {94, 201, 98}, {253, 231, 37}}};
  s = std::clamp(std::isfinite(s) ? s : 0.0, 0.0, 1.0) * (stops.size() - 1);
  const std::size_t i = std::min(static_cast<std::size_t>(s), stops.size() - 2);
  const double f = s - static_cast<double>(i);
  char buf[8];
  int rgb[3];
  for (int c = 0; c < 3; ++c) rgb[c] = static_cast<int>(std::lround(stops[i][c] + f * (stops[i + 1][c] - stops[i][c])));
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
  return buf;
}

std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

}  // namespace

void write_field_svg(std::ostream& os, const Mesh& mesh, const std::vector<FieldPanel>& panels,
                     const std::string& caption) {
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (const auto& v : mesh.vertices()) {
    x0 = std::min(x0, v.x);
    x1 = std::max(x1, v.x);
    y0 = std::min(y0, v.y);
    y1 = std::max(y1, v.y);
  }
  const double scale = kPlot / std::max(x1 - x0, y1 - y0);
  auto px = [&](double x) { return kMarginLeft + (x - x0) * scale; };
  auto py = [&](double y) { return kMarginTop + kPlot - (y - y0) * scale; };

  const double width = kPanelWidth * static_cast<double>(panels.size());
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << kHeight
     << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << width / 2 << "\" y=\"" << kHeight - 10 << "\" text-anchor=\"middle\">" << caption
     << "</text>\n";

  for (std::size_t k = 0; k < panels.size(); ++k) {
    const FieldPanel& panel = panels[k];
    if (panel.cell_values.size() != mesh.num_cells()) {
      throw Error(ErrorKind::InvalidInput, "panel '" + panel.title + "' does not have one value per cell");
    }
    const auto [lo_it, hi_it] = std::minmax_element(panel.cell_values.begin(), panel.cell_values.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    const double span = hi > lo ? hi - lo : 1.0;

    os << "<g transform=\"translate(" << kPanelWidth * static_cast<double>(k) << ",0)\">\n";
    os << "<text x=\"" << kMarginLeft + kPlot / 2 << "\" y=\"" << kMarginTop - 14
       << "\" text-anchor=\"middle\" font-size=\"13\">" << panel.title << "</text>\n";
    for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
      os << "<polygon points=\"";
      for (int v : mesh.cells()[c]) {
        const Point2& p = mesh.vertices()[v];
        os << px(p.x) << ',' << py(p.y) << ' ';
      }
      const std::string fill = color((panel.cell_values[c] - lo) / span);
      os << "\" fill=\"" << fill << "\" stroke=\"" << fill << "\" stroke-width=\"0.5\"/>\n";
    }
    // Axes with ticks at the ends and the middle of the bounding box.
    os << "<g stroke=\"black\" fill=\"none\"><rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop
       << "\" width=\"" << (x1 - x0) * scale << "\" height=\"" << (y1 - y0) * scale << "\"/></g>\n";
    for (int t = 0; t <= 2; ++t) {
      const double xv = x0 + 0.5 * t * (x1 - x0);
      const double yv = y0 + 0.5 * t * (y1 - y0);
      os << "<line x1=\"" << px(xv) << "\" y1=\"" << py(y0) << "\" x2=\"" << px(xv) << "\" y2=\"" << py(y0) + 5
         << "\" stroke=\"black\"/>\n";
      os << "<text x=\"" << px(xv) << "\" y=\"" << py(y0) + 17 << "\" text-anchor=\"middle\">" << label(xv)
         << "</text>\n";
      os << "<line x1=\"" << px(x0) - 5 << "\" y1=\"" << py(yv) << "\" x2=\"" << px(x0) << "\" y2=\"" << py(yv)
         << "\" stroke=\"black\"/>\n";
      os << "<text x=\"" << px(x0) - 8 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">" << label(yv)
         << "</text>\n";
    }
    os << "<text x=\"" << kMarginLeft + kPlot / 2 << "\" y=\"" << py(y0) + 32 << "\" text-anchor=\"middle\">x</text>\n";
    os << "<text x=\"" << kMarginLeft - 34 << "\" y=\"" << kMarginTop + kPlot / 2 << "\">y</text>\n";

    // Colorbar.
    const double cbx = kMarginLeft + kPlot + 15.0;
    const int bands = 32;
    for (int b = 0; b < bands; ++b) {
      const double h = kPlot / bands;
      os << "<rect x=\"" << cbx << "\" y=\"" << kMarginTop + kPlot - (b + 1) * h << "\" width=\"14\" height=\""
         << h + 0.5 << "\" fill=\"" << color((b + 0.5) / bands) << "\"/>\n";
    }
    os << "<rect x=\"" << cbx << "\" y=\"" << kMarginTop << "\" width=\"14\" height=\"" << kPlot
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    os << "<text x=\"" << cbx + 18 << "\" y=\"" << kMarginTop + 4 << "\">" << label(hi) << "</text>\n";
    os << "<text x=\"" << cbx + 18 << "\" y=\"" << kMarginTop + kPlot + 4 << "\">" << label(lo) << "</text>\n";
    os << "</g>\n";
  }
  os << "</svg>\n";
}

std::vector<double> cell_pressure(const DofMap& pressure, const Eigen::VectorXd& p) {
  std::vector<double> out(pressure.mesh().num_cells());
  for (std::size_t c = 0; c < out.size(); ++c) out[c] = evaluate_pressure(pressure, p, static_cast<int>(c), 0.5, 0.5);
  return out;
}

std::vector<double> cell_displacement_magnitude(const DofMap& displacement, const Eigen::VectorXd& u) {
  std::vector<double> out(displacement.mesh().num_cells());
  for (std::size_t c = 0; c < out.size(); ++c) {
    const auto v = evaluate_displacement(displacement, u, static_cast<int>(c), 0.5, 0.5);
    out[c] = std::hypot(v[0], v[1]);
  }
  return out;
}

}  // namespace porosplit
