#pragma once

#include <string>
#include <vector>

namespace chemneuron {

/// One polyline of a line chart; `yerr` (optional, same length as y) draws
/// plain vertical error bars.
struct SvgSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> yerr;
};

/// One group of bars sharing a label, e.g. the per-channel weights of one
/// task variant.
struct SvgBarGroup {
  std::string label;
  std::vector<double> values;
};

/// Static SVG documents for batch results. Deliberately minimal: linear
/// axes, automatic range, small legend. Not a plotting library.
std::string line_chart(const std::string& title, const std::string& x_label,
                       const std::string& y_label,
                       const std::vector<SvgSeries>& series);

std::string bar_chart(const std::string& title, const std::string& y_label,
                      const std::vector<std::string>& bar_labels,
                      const std::vector<SvgBarGroup>& groups);

}  // namespace chemneuron
