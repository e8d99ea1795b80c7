#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace dtagraph::plot {

/// Vertical bar chart. Category labels are drawn only when there are few bars.
std::string bar_chart_svg(std::string_view title, const std::vector<std::string>& labels,
                          const std::vector<double>& values, std::string_view x_label, std::string_view y_label);

std::string scatter_svg(std::string_view title, const std::vector<double>& xs, const std::vector<double>& ys,
                        std::string_view x_label, std::string_view y_label);

}  // namespace dtagraph::plot
