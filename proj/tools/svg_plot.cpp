#include "svg_plot.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace qpr::plot {

namespace {

struct Frame {
  double left, top, width, height;
};

std::string dash_attr(Stroke s) {
  switch (s) {
    case Stroke::Solid: return "";
    case Stroke::Dashed: return " stroke-dasharray=\"8,5\"";
    case Stroke::DashDot: return " stroke-dasharray=\"9,4,2,4\"";
  }
  return "";
}

// Evenly spaced "nice" tick values covering [lo, hi].
std::vector<double> nice_ticks(double lo, double hi, int target) {
  const double raw = (hi - lo) / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 2.5, 5.0, 10.0})
    if (m * mag >= raw) {
      step = m * mag;
      break;
    }
  std::vector<double> out;
  for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * step; v += step) out.push_back(v);
  return out;
}

void draw_panel(std::string& svg, const std::vector<Series>& series, const Axes& ax, const Frame& fr,
                const std::string& clip_id, double font) {
  auto px = [&](double x) { return fr.left + (x - ax.x_min) / (ax.x_max - ax.x_min) * fr.width; };
  auto py = [&](double y) { return fr.top + fr.height - (y - ax.y_min) / (ax.y_max - ax.y_min) * fr.height; };

  svg += fmt::format("<clipPath id=\"{}\"><rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\"/></clipPath>\n",
                     clip_id, fr.left, fr.top, fr.width, fr.height);
  svg += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"white\" stroke=\"black\"/>\n",
                     fr.left, fr.top, fr.width, fr.height);

  for (const auto& [v, label] : ax.x_ticks) {
    const double x = px(v);
    svg += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"black\"/>\n", x,
                       fr.top + fr.height, fr.top + fr.height - 5);
    svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"{}\" text-anchor=\"middle\">{}</text>\n", x,
                       fr.top + fr.height + font + 3, font, label);
  }
  for (double v : nice_ticks(ax.y_min, ax.y_max, 5)) {
    const double y = py(v);
    svg += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" stroke=\"black\"/>\n", fr.left,
                       y, fr.left + 5);
    svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"{}\" text-anchor=\"end\">{:g}</text>\n",
                       fr.left - 4, y + font / 3, font, v);
  }
  if (!ax.x_label.empty())
    svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"{}\" text-anchor=\"middle\">{}</text>\n",
                       fr.left + fr.width / 2, fr.top + fr.height + 2.4 * font + 4, font, ax.x_label);
  if (!ax.y_label.empty())
    svg += fmt::format(
        "<text x=\"{0:.2f}\" y=\"{1:.2f}\" font-size=\"{2}\" text-anchor=\"middle\" transform=\"rotate(-90 {0:.2f} {1:.2f})\">{3}</text>\n",
        fr.left - 3.2 * font, fr.top + fr.height / 2, font, ax.y_label);

  for (const auto& s : series) {
    std::string d;
    for (std::size_t i = 0; i < s.x.size(); ++i)
      d += fmt::format("{}{:.2f},{:.2f}", i == 0 ? "M" : " L", px(s.x[i]), py(s.y[i]));
    svg += fmt::format("<path d=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.8\"{} clip-path=\"url(#{})\"/>\n", d,
                       s.color, dash_attr(s.stroke), clip_id);
  }
}

}  // namespace

std::string render_svg(const std::vector<Series>& series, const Axes& main, const Axes* inset,
                       const std::string& title) {
  const double w = 720, h = 480;
  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\" "
      "font-family=\"sans-serif\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
      w, h);
  svg += fmt::format("<text x=\"{}\" y=\"24\" font-size=\"16\" text-anchor=\"middle\">{}</text>\n", w / 2, title);

  draw_panel(svg, series, main, {80, 40, 600, 370}, "main", 13);
  if (inset) draw_panel(svg, series, *inset, {470, 60, 190, 120}, "inset", 10);

  // Legend, left side of the main panel.
  double ly = 150;
  for (const auto& s : series) {
    svg += fmt::format("<line x1=\"100\" y1=\"{0:.1f}\" x2=\"140\" y2=\"{0:.1f}\" stroke=\"{1}\" stroke-width=\"1.8\"{2}/>\n",
                       ly, s.color, dash_attr(s.stroke));
    svg += fmt::format("<text x=\"148\" y=\"{:.1f}\" font-size=\"13\">{}</text>\n", ly + 4, s.label);
    ly += 20;
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace qpr::plot
