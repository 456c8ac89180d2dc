// Apache License, Version 2.0, refer to LICENSE.txt

#ifndef GRIDPOP_CHART_HPP
#define GRIDPOP_CHART_HPP

#include <string>
#include <vector>

namespace gridpop {

/// Renders a vertical bar chart as standalone SVG text. One <rect> per
/// value; the largest value spans the full plot height and the rest scale
/// proportionally. Output is deterministic: same inputs, same bytes (no
/// timestamps or generated ids).
std::string render_bar_chart(const std::vector<std::string>& labels,
                             const std::vector<double>& values,
                             const std::string& title);

} // namespace gridpop

#endif // GRIDPOP_CHART_HPP
