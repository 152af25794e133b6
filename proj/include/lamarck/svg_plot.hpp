#pragma once

#include <string>
#include <vector>

namespace lamarck {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> lo;  ///< optional band, same length as y
  std::vector<double> hi;
};

struct PlotText {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::string footer;  ///< provenance line under the plot
};

std::string svg_lines(const std::vector<Series>& series, const PlotText& text);

/// One box (min, q1, median, q3, max) per group.
std::string svg_boxes(const std::vector<std::string>& groups, const std::vector<std::vector<double>>& values,
                      const PlotText& text);

/// Grouped bars: one bar per series at each category.
std::string svg_bars(const std::vector<std::string>& categories, const std::vector<Series>& series,
                     const PlotText& text);

}  // namespace lamarck
