#pragma once

#include <string>
#include <utility>
#include <vector>

namespace aam::evaluation {

struct PlotSeries {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool unit_square = false;  // fix both axes to [0, 1] and draw the diagonal
};

// Minimal standalone SVG line chart with a legend.
std::string line_chart_svg(const PlotSpec& spec, const std::vector<PlotSeries>& series);

}  // namespace aam::evaluation
