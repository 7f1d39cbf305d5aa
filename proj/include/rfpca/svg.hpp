#pragma once

#include <string>
#include <vector>

namespace rfpca {

struct ScatterPoint {
  double x = 0.0;
  double y = 0.0;
  std::string label;
};

/// Dependency-free static SVG scatter plot; axes auto-scaled with 5% margins.
std::string scatter_svg(const std::vector<ScatterPoint>& points,
                        const std::string& x_label, const std::string& y_label,
                        const std::string& title);

void write_scatter_svg(const std::string& path, const std::vector<ScatterPoint>& points,
                       const std::string& x_label, const std::string& y_label,
                       const std::string& title);

}  // namespace rfpca
