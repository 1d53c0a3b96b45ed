#pragma once

#include <string>
#include <vector>

namespace optomech {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;  // non-finite values break the line
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false;  // non-positive values are dropped
  std::vector<Series> series;
  int width = 640;
  int height = 420;
};

/// Static line plot with axes, ticks and a legend.
[[nodiscard]] std::string render_svg(const PlotSpec& spec);

}  // namespace optomech
