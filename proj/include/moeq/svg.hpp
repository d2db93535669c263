#pragma once

#include <string>
#include <vector>

namespace moeq {

struct Series {
  std::string label;
  std::vector<double> values;  // plotted against their indices
  std::string color;           // empty -> default palette
};

// Self-contained SVG line chart: grid, ticks, legend, nothing external.
// Output bytes are a pure function of the inputs.
std::string line_chart_svg(const std::string& title, const std::string& x_label,
                           const std::string& y_label, const std::vector<Series>& series,
                           int width = 800, int height = 480);

}  // namespace moeq
