#include "texclass/color.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

#include "texclass/errors.hpp"

namespace texclass {
namespace {

double srgb_to_linear(double c8) {
    const double c = c8 / 255.0;
    return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

double lab_f(double t) {
    constexpr double kCube = 216.0 / 24389.0;  // (6/29)^3
    constexpr double kLin = 24389.0 / 27.0;    // (29/6)^2 * 3 ... applied below
    return t > kCube ? std::cbrt(t) : (kLin * t + 16.0) / 116.0;
}

void rgb_to_hsv(double r, double g, double b, double& h, double& s, double& v) {
    const double mx = std::max({r, g, b});
    const double mn = std::min({r, g, b});
    const double d = mx - mn;
    v = mx;
    s = mx > 0.0 ? d / mx * 255.0 : 0.0;
    if (d <= 0.0) {
        h = 0.0;
        return;
    }
    double deg;
    if (mx == r)
        deg = 60.0 * std::fmod((g - b) / d + 6.0, 6.0);
    else if (mx == g)
        deg = 60.0 * ((b - r) / d + 2.0);
    else
        deg = 60.0 * ((r - g) / d + 4.0);
    h = deg / 360.0 * 255.0;
}

void rgb_to_lab(double r8, double g8, double b8, double& L, double& a, double& b) {
    const double r = srgb_to_linear(r8), g = srgb_to_linear(g8), bl = srgb_to_linear(b8);
    // sRGB -> XYZ, D65 white.
    const double X = 0.4124564 * r + 0.3575761 * g + 0.1804375 * bl;
    const double Y = 0.2126729 * r + 0.7151522 * g + 0.0721750 * bl;
    const double Z = 0.0193339 * r + 0.1191920 * g + 0.9503041 * bl;
    const double fx = lab_f(X / 0.95047);
    const double fy = lab_f(Y / 1.0);
    const double fz = lab_f(Z / 1.08883);
    const double Lstar = 116.0 * fy - 16.0;
    const double astar = 500.0 * (fx - fy);
    const double bstar = 200.0 * (fy - fz);
    L = std::clamp(Lstar * 255.0 / 100.0, 0.0, 255.0);
    a = std::clamp((astar + 128.0) * 255.0 / 256.0, 0.0, 255.0);
    b = std::clamp((bstar + 128.0) * 255.0 / 256.0, 0.0, 255.0);
}

void rgb_to_ycbcr(double r, double g, double b, double& y, double& cb, double& cr) {
    // Full-range BT.601.
    y = 0.299 * r + 0.587 * g + 0.114 * b;
    cb = std::clamp(128.0 - 0.168736 * r - 0.331264 * g + 0.5 * b, 0.0, 255.0);
    cr = std::clamp(128.0 + 0.5 * r - 0.418688 * g - 0.081312 * b, 0.0, 255.0);
}

}  // namespace

const char* color_space_name(ColorSpace s) {
    switch (s) {
        case ColorSpace::RGB: return "RGB";
        case ColorSpace::HSV: return "HSV";
        case ColorSpace::CIELAB: return "LAB";
        case ColorSpace::YCbCr: return "YCbCr";
    }
    return "?";
}

ColorSpace parse_color_space(const std::string& name) {
    std::string u;
    for (char c : name) u.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    if (u == "RGB") return ColorSpace::RGB;
    if (u == "HSV") return ColorSpace::HSV;
    if (u == "LAB" || u == "CIELAB") return ColorSpace::CIELAB;
    if (u == "YCBCR") return ColorSpace::YCbCr;
    throw std::invalid_argument("unknown color space '" + name + "' (want RGB, HSV, CIELAB or YCbCr)");
}

std::string channel_name(const ChannelRef& ch) {
    static const char* const names[4][3] = {
        {"R", "G", "B"}, {"H", "S", "V"}, {"L", "a", "b"}, {"Y", "Cb", "Cr"}};
    return std::string(color_space_name(ch.space)) + "." + names[static_cast<int>(ch.space)][ch.index];
}

ChannelRef parse_channel(const std::string& name) {
    auto lower = [](const std::string& s) {
        std::string out;
        for (char c : s) out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        return out;
    };
    const std::string want = lower(name);
    for (const ChannelRef& ch :
         channels_of({ColorSpace::RGB, ColorSpace::HSV, ColorSpace::CIELAB, ColorSpace::YCbCr}))
        if (lower(channel_name(ch)) == want) return ch;
    throw DataError("unknown channel '" + name + "' (want e.g. RGB.B, HSV.S, LAB.L, YCbCr.Cr)");
}

std::array<GrayImage, 3> split_channels(const ColorImage& img, ColorSpace space) {
    std::array<GrayImage, 3> out{GrayImage(img.width, img.height), GrayImage(img.width, img.height),
                                 GrayImage(img.width, img.height)};
    const size_t n = img.pixel_count();
    for (size_t i = 0; i < n; ++i) {
        const double r = img.planes[0][i], g = img.planes[1][i], b = img.planes[2][i];
        double c0, c1, c2;
        switch (space) {
            case ColorSpace::RGB: c0 = r, c1 = g, c2 = b; break;
            case ColorSpace::HSV: rgb_to_hsv(r, g, b, c0, c1, c2); break;
            case ColorSpace::CIELAB: rgb_to_lab(r, g, b, c0, c1, c2); break;
            case ColorSpace::YCbCr: rgb_to_ycbcr(r, g, b, c0, c1, c2); break;
        }
        out[0].data[i] = c0;
        out[1].data[i] = c1;
        out[2].data[i] = c2;
    }
    return out;
}

GrayImage extract_channel(const ColorImage& img, const ChannelRef& ch) {
    if (ch.index < 0 || ch.index > 2) throw std::invalid_argument("channel index must be 0..2");
    if (ch.space == ColorSpace::RGB) {
        GrayImage g(img.width, img.height);
        const auto& p = img.planes[ch.index];
        std::copy(p.begin(), p.end(), g.data.begin());
        return g;
    }
    return split_channels(img, ch.space)[ch.index];
}

ColorImage assemble_rgb(const std::array<GrayImage, 3>& planes) {
    for (int c = 1; c < 3; ++c)
        if (planes[c].width != planes[0].width || planes[c].height != planes[0].height)
            throw std::invalid_argument("assemble_rgb: plane dimensions differ");
    ColorImage img(planes[0].width, planes[0].height);
    for (int c = 0; c < 3; ++c)
        for (size_t i = 0; i < planes[c].data.size(); ++i)
            img.planes[c][i] = static_cast<std::uint8_t>(std::lround(std::clamp(planes[c].data[i], 0.0, 255.0)));
    return img;
}

std::vector<ChannelRef> channels_of(const std::vector<ColorSpace>& spaces) {
    std::vector<ChannelRef> refs;
    for (ColorSpace s : spaces)
        for (int i = 0; i < 3; ++i) refs.push_back({s, i});
    return refs;
}

}  // namespace texclass
