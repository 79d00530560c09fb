#pragma once

#include <string>
#include <vector>

namespace aoinoma {

struct PlotSeries {
  std::string label;
  std::string color;  ///< e.g. "#1f77b4"
  std::vector<double> x;
  std::vector<double> y;
};

/// Self-contained 640x420 line chart: axes, ticks, one polyline per series,
/// legend. Pure function of its inputs (no timestamps, no external
/// resources), so the output is byte-stable.
std::string line_plot_svg(const std::string& title, const std::string& x_label,
                          const std::string& y_label,
                          const std::vector<PlotSeries>& series);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace aoinoma
