#pragma once

#include <string>
#include <vector>

namespace entspec {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
  bool markers = false;  ///< points instead of a polyline
  bool dashed = false;
};

/// Minimal static SVG line plot. Non-finite samples are skipped.
std::string svg_plot(const std::string& title, const std::string& x_label,
                     const std::string& y_label, const std::vector<PlotSeries>& series);

}  // namespace entspec
