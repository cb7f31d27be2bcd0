#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace texclass {

/// Real-valued single-plane raster, row-major. Sources are 8-bit but derived
/// images (color conversions, gradients, FD maps) need fractional values.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<double> data;

    GrayImage() = default;
    GrayImage(int w, int h, double fill = 0.0)
        : width(w), height(h), data(static_cast<size_t>(w) * h, fill) {}

    double& at(int y, int x) { return data[static_cast<size_t>(y) * width + x]; }
    double at(int y, int x) const { return data[static_cast<size_t>(y) * width + x]; }
    size_t pixel_count() const { return data.size(); }
    bool in_bounds(int y, int x) const { return y >= 0 && y < height && x >= 0 && x < width; }
};

/// 3-channel 8-bit raster, red/green/blue plane order at rest.
struct ColorImage {
    int width = 0;
    int height = 0;
    std::array<std::vector<std::uint8_t>, 3> planes;

    ColorImage() = default;
    ColorImage(int w, int h) : width(w), height(h) {
        for (auto& p : planes) p.assign(static_cast<size_t>(w) * h, 0);
    }

    std::uint8_t& at(int c, int y, int x) { return planes[c][static_cast<size_t>(y) * width + x]; }
    std::uint8_t at(int c, int y, int x) const { return planes[c][static_cast<size_t>(y) * width + x]; }
    size_t pixel_count() const { return static_cast<size_t>(width) * height; }
};

/// Gray-level binned image; every value is in [0, levels-1].
struct QuantizedImage {
    int width = 0;
    int height = 0;
    int levels = 0;
    std::vector<std::uint8_t> data;

    QuantizedImage() = default;
    QuantizedImage(int w, int h, int g)
        : width(w), height(h), levels(g), data(static_cast<size_t>(w) * h, 0) {}

    std::uint8_t& at(int y, int x) { return data[static_cast<size_t>(y) * width + x]; }
    std::uint8_t at(int y, int x) const { return data[static_cast<size_t>(y) * width + x]; }
    size_t pixel_count() const { return data.size(); }
};

/// 0/1 mask, dimensions matching the plane it was segmented from.
struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    BinaryMask() = default;
    BinaryMask(int w, int h, std::uint8_t fill = 0)
        : width(w), height(h), data(static_cast<size_t>(w) * h, fill) {}

    std::uint8_t& at(int y, int x) { return data[static_cast<size_t>(y) * width + x]; }
    std::uint8_t at(int y, int x) const { return data[static_cast<size_t>(y) * width + x]; }
};

/// Axis-aligned pixel rectangle, origin at (x, y), w*h >= 1.
struct PixelRect {
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;
};

/// Uniform binning of the image's own [min, max] range into `levels` bins.
/// Constant images map every pixel to bin 0. Monotone in source intensity.
QuantizedImage quantize(const GrayImage& img, int levels);

/// Center-truncates to the largest multiple of `tile` in each dimension and
/// cuts row-major non-overlapping tiles. Throws if tile exceeds a dimension.
std::vector<ColorImage> subdivide(const ColorImage& img, int tile);

/// Replicates one gray plane into all three channels (8-bit clamp).
ColorImage replicate_gray(const GrayImage& img);

}  // namespace texclass
