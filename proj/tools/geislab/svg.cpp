#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include <fmt/format.h>

namespace geislab::svg {
namespace {

constexpr double width = 640, height = 420, margin = 60;
const char* const palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else if (c == '&') out += "&amp;";
        else out += c;
    }
    return out;
}

}  // namespace

void plot(const std::filesystem::path& path, const std::string& title, const std::vector<Series>& series,
          bool log_x, bool log_y) {
    auto tx = [&](double v) { return log_x ? std::log10(v) : v; };
    auto ty = [&](double v) { return log_y ? std::log10(v) : v; };
    auto usable = [&](double x, double y) {
        return std::isfinite(x) && std::isfinite(y) && (!log_x || x > 0) && (!log_y || y > 0);
    };
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!usable(s.x[i], s.y[i])) continue;
            x0 = std::min(x0, tx(s.x[i]));
            x1 = std::max(x1, tx(s.x[i]));
            y0 = std::min(y0, ty(s.y[i]));
            y1 = std::max(y1, ty(s.y[i]));
        }
    }
    if (!(x0 <= x1)) x0 = 0, x1 = 1;
    if (!(y0 <= y1)) y0 = 0, y1 = 1;
    if (x1 == x0) x1 = x0 + 1;
    if (y1 == y0) y1 = y0 + 1;
    auto px = [&](double v) { return margin + (tx(v) - x0) / (x1 - x0) * (width - 2 * margin); };
    auto py = [&](double v) { return height - margin - (ty(v) - y0) / (y1 - y0) * (height - 2 * margin); };

    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    out << fmt::format(R"(<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}">)", width, height) << '\n';
    out << R"(<rect width="100%" height="100%" fill="white"/>)" << '\n';
    out << fmt::format(R"(<text x="{}" y="24" font-family="sans-serif" font-size="15">{}</text>)", margin,
                       escape(title))
        << '\n';
    out << fmt::format(R"(<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="black"/>)", margin,
                       margin, width - 2 * margin, height - 2 * margin)
        << '\n';
    auto label = [&](double v, bool log) { return log ? fmt::format("1e{:.2g}", v) : fmt::format("{:.3g}", v); };
    out << fmt::format(R"(<text x="{}" y="{}" font-size="11">{}</text>)", margin, height - margin + 16, label(x0, log_x))
        << fmt::format(R"(<text x="{}" y="{}" font-size="11" text-anchor="end">{}</text>)", width - margin,
                       height - margin + 16, label(x1, log_x))
        << fmt::format(R"(<text x="{}" y="{}" font-size="11" text-anchor="end">{}</text>)", margin - 4,
                       height - margin, label(y0, log_y))
        << fmt::format(R"(<text x="{}" y="{}" font-size="11" text-anchor="end">{}</text>)", margin - 4, margin + 10,
                       label(y1, log_y))
        << '\n';
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* colour = palette[k % std::size(palette)];
        std::string pts;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (usable(s.x[i], s.y[i])) pts += fmt::format("{:.2f},{:.2f} ", px(s.x[i]), py(s.y[i]));
        }
        out << fmt::format(R"(<polyline fill="none" stroke="{}" stroke-width="1.5" points="{}"/>)", colour, pts)
            << '\n';
        out << fmt::format(R"(<text x="{}" y="{}" font-size="12" fill="{}">{}</text>)", width - margin + 4,
                           margin + 14 * (k + 1), colour, escape(s.label))
            << '\n';
    }
    out << "</svg>\n";
}

}  // namespace geislab::svg
