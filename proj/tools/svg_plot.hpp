#pragma once

#include <string>
#include <vector>

namespace qpr::plot {

enum class Stroke { Solid, Dashed, DashDot };

struct Series {
  std::string label;
  std::string color;
  Stroke stroke = Stroke::Solid;
  std::vector<double> x;
  std::vector<double> y;
};

struct Axes {
  std::string x_label;
  std::string y_label;
  double x_min = 0, x_max = 1;
  double y_min = 0, y_max = 1;
  std::vector<std::pair<double, std::string>> x_ticks;
};

/// Self-contained SVG: a main panel clipped to `main` and, when `inset`
/// is given, a smaller panel in the upper right drawn over the full range.
std::string render_svg(const std::vector<Series>& series, const Axes& main, const Axes* inset,
                       const std::string& title);

}  // namespace qpr::plot
