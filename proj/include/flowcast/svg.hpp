#pragma once

#include <string>
#include <utility>
#include <vector>

namespace flowcast {

// Self-contained SVG charts for report output. Output depends only on the
// arguments (no timestamps), so re-renders are byte-identical.
std::string svg_bar_chart(const std::string& title,
                          const std::vector<std::pair<std::string, double>>& bars);

struct LineSeries {
    std::string name;
    std::vector<std::pair<double, double>> points; // (x, y), pre-sorted by caller
};

std::string svg_line_chart(const std::string& title, const std::string& x_label,
                           const std::string& y_label,
                           const std::vector<LineSeries>& series);

} // namespace flowcast
