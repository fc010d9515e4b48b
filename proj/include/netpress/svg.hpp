#pragma once

#include <string>
#include <vector>

namespace netpress {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Multi-series line chart written directly as SVG text (polyline
/// primitives, linear axes auto-scaled to the data extents, legend from the
/// series labels). No external renderer involved.
void write_line_chart(const std::string& path,
                      const std::vector<Series>& series,
                      const std::string& x_label, const std::string& y_label,
                      const std::string& title);

}  // namespace netpress
