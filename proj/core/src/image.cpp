#include "texclass/image.hpp"

#include <algorithm>
#include <cmath>

#include "texclass/errors.hpp"

namespace texclass {

QuantizedImage quantize(const GrayImage& img, int levels) {
    if (levels < 2 || levels > 256)
        throw std::invalid_argument("quantize: levels must be in [2, 256], got " + std::to_string(levels));
    if (img.data.empty()) throw std::invalid_argument("quantize: empty image");

    auto [mn_it, mx_it] = std::minmax_element(img.data.begin(), img.data.end());
    const double mn = *mn_it, mx = *mx_it;

    QuantizedImage out(img.width, img.height, levels);
    if (mx <= mn) return out;  // constant image: all bin 0

    const double scale = levels / (mx - mn);
    for (size_t i = 0; i < img.data.size(); ++i) {
        int bin = static_cast<int>((img.data[i] - mn) * scale);
        out.data[i] = static_cast<std::uint8_t>(std::clamp(bin, 0, levels - 1));
    }
    return out;
}

std::vector<ColorImage> subdivide(const ColorImage& img, int tile) {
    if (tile < 1) throw std::invalid_argument("subdivide: tile must be >= 1");
    if (tile > img.width || tile > img.height)
        throw std::invalid_argument("subdivide: tile " + std::to_string(tile) + " exceeds image " +
                                    std::to_string(img.width) + "x" + std::to_string(img.height));

    const int cols = img.width / tile;
    const int rows = img.height / tile;
    const int x0 = (img.width - cols * tile) / 2;
    const int y0 = (img.height - rows * tile) / 2;

    std::vector<ColorImage> tiles;
    tiles.reserve(static_cast<size_t>(rows) * cols);
    for (int ty = 0; ty < rows; ++ty) {
        for (int tx = 0; tx < cols; ++tx) {
            ColorImage t(tile, tile);
            for (int c = 0; c < 3; ++c)
                for (int y = 0; y < tile; ++y)
                    for (int x = 0; x < tile; ++x)
                        t.at(c, y, x) = img.at(c, y0 + ty * tile + y, x0 + tx * tile + x);
            tiles.push_back(std::move(t));
        }
    }
    return tiles;
}

ColorImage replicate_gray(const GrayImage& img) {
    ColorImage out(img.width, img.height);
    for (size_t i = 0; i < img.data.size(); ++i) {
        const double v = std::clamp(img.data[i], 0.0, 255.0);
        const auto b = static_cast<std::uint8_t>(std::lround(v));
        out.planes[0][i] = b;
        out.planes[1][i] = b;
        out.planes[2][i] = b;
    }
    return out;
}

}  // namespace texclass
