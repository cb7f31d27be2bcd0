#include "texclass/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "texclass/errors.hpp"

namespace texclass {

namespace {

const char* kPalette[] = {"#1b6ca8", "#c1403d", "#3d8f4e", "#8a5fb0", "#b07c2a", "#4a4a4a"};
constexpr int kPaletteSize = 6;

std::string escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

}  // namespace

void write_svg_chart(const std::string& path, const LineChart& chart, int width, int height) {
    const double ml = 64, mr = 24, mt = 36, mb = 48;
    const double pw = width - ml - mr;
    const double ph = height - mt - mb;

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : chart.series)
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    if (!(xmin <= xmax)) {
        xmin = 0;
        xmax = 1;
        ymin = 0;
        ymax = 1;
    }
    if (xmax == xmin) {
        xmin -= 0.5;
        xmax += 0.5;
    }
    if (ymax == ymin) {
        ymin -= 0.5;
        ymax += 0.5;
    }
    const double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;

    auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double y) { return mt + ph - (y - ymin) / (ymax - ymin) * ph; };

    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open " + path + " for writing");
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    out << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    if (!chart.title.empty())
        out << "<text x=\"" << num(width / 2.0)
            << "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">"
            << escape(chart.title) << "</text>\n";

    // axes and ticks
    out << "<g stroke=\"#333333\" stroke-width=\"1\" fill=\"none\">\n";
    out << "<path d=\"M" << num(ml) << ' ' << num(mt) << " L" << num(ml) << ' ' << num(mt + ph)
        << " L" << num(ml + pw) << ' ' << num(mt + ph) << "\"/>\n";
    out << "</g>\n";
    out << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333333\">\n";
    const int nticks = 5;
    for (int t = 0; t < nticks; ++t) {
        const double fx = xmin + (xmax - xmin) * t / (nticks - 1);
        const double fy = ymin + (ymax - ymin) * t / (nticks - 1);
        out << "<line x1=\"" << num(px(fx)) << "\" y1=\"" << num(mt + ph) << "\" x2=\"" << num(px(fx))
            << "\" y2=\"" << num(mt + ph + 4) << "\" stroke=\"#333333\"/>\n";
        out << "<text x=\"" << num(px(fx)) << "\" y=\"" << num(mt + ph + 16)
            << "\" text-anchor=\"middle\">" << tick_label(fx) << "</text>\n";
        out << "<line x1=\"" << num(ml - 4) << "\" y1=\"" << num(py(fy)) << "\" x2=\"" << num(ml)
            << "\" y2=\"" << num(py(fy)) << "\" stroke=\"#333333\"/>\n";
        out << "<text x=\"" << num(ml - 7) << "\" y=\"" << num(py(fy) + 4)
            << "\" text-anchor=\"end\">" << tick_label(fy) << "</text>\n";
    }
    if (!chart.x_label.empty())
        out << "<text x=\"" << num(ml + pw / 2) << "\" y=\"" << num(height - 10.0)
            << "\" text-anchor=\"middle\">" << escape(chart.x_label) << "</text>\n";
    if (!chart.y_label.empty())
        out << "<text x=\"14\" y=\"" << num(mt + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
            << num(mt + ph / 2) << ")\">" << escape(chart.y_label) << "</text>\n";
    out << "</g>\n";

    for (std::size_t si = 0; si < chart.series.size(); ++si) {
        const auto& s = chart.series[si];
        const char* color = kPalette[si % kPaletteSize];
        std::string d;
        bool open = false;
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
                open = false;
                continue;
            }
            d += open ? " L" : (d.empty() ? "M" : " M");
            d += num(px(s.x[i])) + " " + num(py(s.y[i]));
            open = true;
        }
        if (!d.empty())
            out << "<path d=\"" << d << "\" fill=\"none\" stroke=\"" << color
                << "\" stroke-width=\"1.5\"/>\n";
    }

    // legend, top right of the plot area
    out << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
    for (std::size_t si = 0; si < chart.series.size(); ++si) {
        const double ly = mt + 14 + 16.0 * si;
        const double lx = ml + pw - 130;
        out << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly - 4) << "\" x2=\"" << num(lx + 22)
            << "\" y2=\"" << num(ly - 4) << "\" stroke=\"" << kPalette[si % kPaletteSize]
            << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << num(lx + 28) << "\" y=\"" << num(ly) << "\">"
            << escape(chart.series[si].name) << "</text>\n";
    }
    out << "</g>\n</svg>\n";
    if (!out) throw DataError("write failed: " + path);
}

}  // namespace texclass
