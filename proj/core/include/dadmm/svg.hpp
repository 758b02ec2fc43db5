#pragma once

#include <string>
#include <utility>
#include <vector>

namespace dadmm {

struct SvgSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

// Minimal static line chart; non-finite points are skipped.
std::string line_chart_svg(const std::string& title, const std::string& x_label,
                           const std::string& y_label,
                           const std::vector<SvgSeries>& series,
                           const std::string& comment = "");

void write_line_chart_svg(const std::string& path, const std::string& title,
                          const std::string& x_label, const std::string& y_label,
                          const std::vector<SvgSeries>& series,
                          const std::string& comment = "");

}  // namespace dadmm
