#pragma once

#include <string>
#include <vector>

namespace texclass {

/// Minimal multi-series line chart. NaN points break the polyline.
struct LineChart {
    struct Series {
        std::string name;
        std::vector<double> x;
        std::vector<double> y;
    };
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Series> series;
};

/// Writes a self-contained SVG. Output is a pure function of the chart data
/// (axis ranges and tick positions are derived deterministically).
void write_svg_chart(const std::string& path, const LineChart& chart, int width = 720,
                     int height = 480);

}  // namespace texclass
