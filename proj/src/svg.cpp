#include "flowcast/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "flowcast/errors.hpp"

namespace flowcast {

namespace {

constexpr int kWidth = 640;
constexpr int kHeight = 400;
constexpr int kMarginLeft = 60;
constexpr int kMarginRight = 20;
constexpr int kMarginTop = 40;
constexpr int kMarginBottom = 50;

const char* kPalette[] = {"#4878a8", "#d0804f", "#6aa36a", "#a06ab4"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '&') out += "&amp;";
        else if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else out += c;
    }
    return out;
}

std::string header(const std::string& title) {
    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                      std::to_string(kWidth) + "\" height=\"" + std::to_string(kHeight) +
                      "\" viewBox=\"0 0 " + std::to_string(kWidth) + " " +
                      std::to_string(kHeight) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out += "<text x=\"" + std::to_string(kWidth / 2) + "\" y=\"24\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"16\">" + escape(title) + "</text>\n";
    return out;
}

// y-axis with 5 ticks from 0 to ymax
std::string y_axis(double ymax, const std::string& y_label) {
    std::string out;
    int plot_h = kHeight - kMarginTop - kMarginBottom;
    for (int i = 0; i <= 5; ++i) {
        double frac = static_cast<double>(i) / 5.0;
        int y = kHeight - kMarginBottom - static_cast<int>(frac * plot_h);
        out += "<line x1=\"" + std::to_string(kMarginLeft) + "\" y1=\"" + std::to_string(y) +
               "\" x2=\"" + std::to_string(kWidth - kMarginRight) + "\" y2=\"" +
               std::to_string(y) + "\" stroke=\"#dddddd\"/>\n";
        out += "<text x=\"" + std::to_string(kMarginLeft - 6) + "\" y=\"" +
               std::to_string(y + 4) + "\" text-anchor=\"end\" font-family=\"sans-serif\" "
               "font-size=\"11\">" + num(frac * ymax) + "</text>\n";
    }
    if (!y_label.empty())
        out += "<text x=\"14\" y=\"" + std::to_string(kHeight / 2) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
               "transform=\"rotate(-90 14 " + std::to_string(kHeight / 2) + ")\">" +
               escape(y_label) + "</text>\n";
    return out;
}

} // namespace

std::string svg_bar_chart(const std::string& title,
                          const std::vector<std::pair<std::string, double>>& bars) {
    if (bars.empty()) throw EmptyInputError("bar chart data");
    double ymax = 0.0;
    for (const auto& [_, v] : bars) ymax = std::max(ymax, v);
    if (ymax <= 0.0) ymax = 1.0;

    std::string out = header(title);
    out += y_axis(ymax, "value");
    int plot_w = kWidth - kMarginLeft - kMarginRight;
    int plot_h = kHeight - kMarginTop - kMarginBottom;
    double slot = static_cast<double>(plot_w) / static_cast<double>(bars.size());
    double bar_w = slot * 0.6;
    for (size_t i = 0; i < bars.size(); ++i) {
        double h = bars[i].second / ymax * plot_h;
        double x = kMarginLeft + slot * static_cast<double>(i) + (slot - bar_w) / 2.0;
        double y = kHeight - kMarginBottom - h;
        out += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(bar_w) +
               "\" height=\"" + num(h) + "\" fill=\"" + kPalette[i % 4] + "\"/>\n";
        out += "<text x=\"" + num(x + bar_w / 2.0) + "\" y=\"" +
               std::to_string(kHeight - kMarginBottom + 16) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
               escape(bars[i].first) + "</text>\n";
        out += "<text x=\"" + num(x + bar_w / 2.0) + "\" y=\"" + num(y - 4) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
               num(bars[i].second) + "</text>\n";
    }
    out += "</svg>\n";
    return out;
}

std::string svg_line_chart(const std::string& title, const std::string& x_label,
                           const std::string& y_label,
                           const std::vector<LineSeries>& series) {
    if (series.empty()) throw EmptyInputError("line chart data");
    double xmin = 1e300, xmax = -1e300, ymax = 0.0;
    for (const LineSeries& s : series) {
        if (s.points.empty()) throw EmptyInputError("line chart series '" + s.name + "'");
        for (const auto& [x, y] : s.points) {
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymax = std::max(ymax, y);
        }
    }
    if (ymax <= 0.0) ymax = 1.0;
    if (xmax <= xmin) xmax = xmin + 1.0;

    std::string out = header(title);
    out += y_axis(ymax, y_label);
    int plot_w = kWidth - kMarginLeft - kMarginRight;
    int plot_h = kHeight - kMarginTop - kMarginBottom;
    auto px = [&](double x) {
        return kMarginLeft + (x - xmin) / (xmax - xmin) * plot_w;
    };
    auto py = [&](double y) { return kHeight - kMarginBottom - y / ymax * plot_h; };

    for (size_t si = 0; si < series.size(); ++si) {
        const char* color = kPalette[si % 4];
        std::string path;
        for (size_t i = 0; i < series[si].points.size(); ++i) {
            const auto& [x, y] = series[si].points[i];
            path += (i == 0 ? "M" : " L");
            path += num(px(x)) + " " + num(py(y));
        }
        out += "<path d=\"" + path + "\" fill=\"none\" stroke=\"" + color +
               "\" stroke-width=\"2\"/>\n";
        out += "<text x=\"" + std::to_string(kMarginLeft + 8) + "\" y=\"" +
               std::to_string(kMarginTop + 14 + 16 * static_cast<int>(si)) +
               "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" + color + "\">" +
               escape(series[si].name) + "</text>\n";
    }
    out += "<text x=\"" + std::to_string(kMarginLeft + plot_w / 2) + "\" y=\"" +
           std::to_string(kHeight - 12) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" +
           escape(x_label) + "</text>\n";
    out += "</svg>\n";
    return out;
}

} // namespace flowcast
