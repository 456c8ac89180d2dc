// Apache License, Version 2.0, refer to LICENSE.txt

#include "gridpop/chart.hpp"

#include <algorithm>
#include <cmath>

#include "gridpop/errors.hpp"
#include "gridpop/numeric.hpp"

namespace gridpop {

namespace {

constexpr double kPlotHeight = 320.0;
constexpr double kBarWidth = 24.0;
constexpr double kBarGap = 10.0;
constexpr double kMarginLeft = 64.0;
constexpr double kMarginRight = 20.0;

std::string escape_xml(const std::string& text)
{
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&':
                out += "&amp;";
                break;
            case '<':
                out += "&lt;";
                break;
            case '>':
                out += "&gt;";
                break;
            case '"':
                out += "&quot;";
                break;
            default:
                out.push_back(c);
        }
    }
    return out;
}

std::string num(double v)
{
    return format_double(v);
}

} // namespace

std::string render_bar_chart(const std::vector<std::string>& labels,
                             const std::vector<double>& values,
                             const std::string& title)
{
    if (labels.empty() || values.empty()) {
        throw EmptyInput("bar chart needs at least one value");
    }
    if (labels.size() != values.size()) {
        throw LengthMismatch("bar chart needs one label per value");
    }
    for (double v : values) {
        if (!std::isfinite(v) || v < 0.0) {
            throw std::invalid_argument(
              "bar chart values must be finite and non-negative");
        }
    }

    const double max_value = *std::max_element(values.begin(), values.end());
    const double margin_top = 56.0;
    const double margin_bottom = 132.0;
    const auto n = static_cast<double>(labels.size());
    const double width =
      kMarginLeft + n * (kBarWidth + kBarGap) + kBarGap + kMarginRight;
    const double height = margin_top + kPlotHeight + margin_bottom;
    const double base_y = margin_top + kPlotHeight;

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) +
           "\" height=\"" + num(height) + "\" viewBox=\"0 0 " + num(width) +
           " " + num(height) + "\">\n";
    svg += "<title>" + escape_xml(title) + "</title>\n";
    svg += "<text x=\"" + num(width / 2.0) +
           "\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"16\">" +
           escape_xml(title) + "</text>\n";

    // Axes.
    svg += "<line x1=\"" + num(kMarginLeft) + "\" y1=\"" + num(margin_top) +
           "\" x2=\"" + num(kMarginLeft) + "\" y2=\"" + num(base_y) +
           "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    svg += "<line x1=\"" + num(kMarginLeft) + "\" y1=\"" + num(base_y) +
           "\" x2=\"" + num(width - kMarginRight) + "\" y2=\"" + num(base_y) +
           "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"" + num(kMarginLeft - 6.0) + "\" y=\"" +
           num(margin_top + 4.0) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"11\">" +
           num(max_value) + "</text>\n";
    svg += "<text x=\"" + num(kMarginLeft - 6.0) + "\" y=\"" +
           num(base_y + 4.0) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"11\">0</text>\n";

    for (std::size_t i = 0; i < values.size(); ++i) {
        const double h =
          max_value > 0.0 ? values[i] / max_value * kPlotHeight : 0.0;
        const double x =
          kMarginLeft + kBarGap + static_cast<double>(i) * (kBarWidth + kBarGap);
        const double y = base_y - h;
        svg += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" +
               num(kBarWidth) + "\" height=\"" + num(h) +
               "\" fill=\"#4477aa\"/>\n";
        const double label_x = x + kBarWidth / 2.0;
        const double label_y = base_y + 12.0;
        svg += "<text x=\"" + num(label_x) + "\" y=\"" + num(label_y) +
               "\" font-family=\"sans-serif\" font-size=\"11\" "
               "text-anchor=\"end\" transform=\"rotate(-45 " + num(label_x) +
               " " + num(label_y) + ")\">" +
               escape_xml(labels[i]) + "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

} // namespace gridpop
