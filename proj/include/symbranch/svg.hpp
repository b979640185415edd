#ifndef SYMBRANCH_SVG_HPP
#define SYMBRANCH_SVG_HPP

#include <string>
#include <utility>
#include <vector>

namespace sbm {

// Minimal line-chart writer built from SVG primitives; enough to plot the
// critical curve and envelope medians without a plotting dependency.
struct SvgSeries {
  std::string label;
  std::string color = "#1f6feb";
  std::vector<std::pair<double, double>> points;
};

void write_svg_chart(const std::string& path, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     const std::vector<SvgSeries>& series, bool log_x = false,
                     bool log_y = false);

}  // namespace sbm

#endif
