#include "texclass/morphology.hpp"

#include <limits>
#include <stdexcept>

namespace texclass {

StructuringElement StructuringElement::square(int size) {
    if (size < 1 || size % 2 == 0) throw std::invalid_argument("structuring element size must be odd and >= 1");
    StructuringElement se;
    se.width = se.height = size;
    const int r = size / 2;
    se.support.reserve(static_cast<size_t>(size) * size);
    for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx) se.support.emplace_back(dy, dx);
    return se;
}

namespace {

enum class Extremum { Max, Min };

// Shared kernel: dilation samples img(s - dy, t - dx), erosion img(s + dy, t + dx).
// Offsets falling outside the image are skipped (domain-restricted, no padding).
GrayImage extremum_filter(const GrayImage& img, const StructuringElement& se, Extremum which) {
    if (se.support.empty()) throw std::invalid_argument("structuring element has empty support");
    if (se.width > img.width || se.height > img.height)
        throw std::invalid_argument("structuring element does not fit in image");

    const int sign = which == Extremum::Max ? -1 : 1;
    GrayImage out(img.width, img.height);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            double best = which == Extremum::Max ? -std::numeric_limits<double>::infinity()
                                                 : std::numeric_limits<double>::infinity();
            bool hit = false;
            for (const auto& [dy, dx] : se.support) {
                const int sy = y + sign * dy;
                const int sx = x + sign * dx;
                if (!img.in_bounds(sy, sx)) continue;
                const double v = img.at(sy, sx);
                if (!hit || (which == Extremum::Max ? v > best : v < best)) best = v;
                hit = true;
            }
            // The fit precondition guarantees at least one in-bounds placement
            // for elements whose support spans the declared rectangle.
            out.at(y, x) = hit ? best : img.at(y, x);
        }
    }
    return out;
}

}  // namespace

GrayImage dilate(const GrayImage& img, const StructuringElement& se) {
    return extremum_filter(img, se, Extremum::Max);
}

GrayImage erode(const GrayImage& img, const StructuringElement& se) {
    return extremum_filter(img, se, Extremum::Min);
}

GrayImage gradient(const GrayImage& img, const StructuringElement& se) {
    const GrayImage d = dilate(img, se);
    const GrayImage e = erode(img, se);
    GrayImage out(img.width, img.height);
    for (size_t i = 0; i < out.data.size(); ++i) out.data[i] = d.data[i] - e.data[i];
    return out;
}

}  // namespace texclass
