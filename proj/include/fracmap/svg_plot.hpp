#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace fracmap {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
};

/// Polylines with axes, tick labels and a legend. Points that cannot be drawn
/// (non-finite, or nonpositive on a log axis) are skipped.
void write_line_plot(const std::filesystem::path& path, const PlotSpec& spec, const std::vector<PlotSeries>& series);

}  // namespace fracmap
