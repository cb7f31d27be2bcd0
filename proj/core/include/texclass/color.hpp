#pragma once

#include <array>
#include <string>
#include <vector>

#include "texclass/image.hpp"

namespace texclass {

enum class ColorSpace { RGB, HSV, CIELAB, YCbCr };

/// One of the 12 channels across the four supported color spaces.
struct ChannelRef {
    ColorSpace space = ColorSpace::RGB;
    int index = 0;  // 0..2 within the space
};

const char* color_space_name(ColorSpace s);
ColorSpace parse_color_space(const std::string& name);

/// Channel display name, e.g. "RGB.B", "HSV.S", "LAB.a", "YCbCr.Cr".
std::string channel_name(const ChannelRef& ch);

/// Inverse of channel_name (case-insensitive). Throws DataError on unknown names.
ChannelRef parse_channel(const std::string& name);

/// All three channels of `img` in the requested space, each rescaled to
/// [0, 255] so downstream stages are space agnostic. RGB is a plain split.
/// HSV is the hexcone model with H stored as angle/360 * 255. CIELAB uses
/// sRGB primaries with D65 white (L* * 2.55; a*, b* mapped from [-128, 128]
/// so the achromatic axis lands on 127.5). YCbCr is full-range ITU-R BT.601.
std::array<GrayImage, 3> split_channels(const ColorImage& img, ColorSpace space);

/// Single channel extraction; convenience over split_channels.
GrayImage extract_channel(const ColorImage& img, const ChannelRef& ch);

/// Inverse of the RGB split (exact round trip for RGB planes).
ColorImage assemble_rgb(const std::array<GrayImage, 3>& planes);

/// The 12 channel refs in reporting order (R,G,B,H,S,V,L,a,b,Y,Cb,Cr),
/// filtered to the requested spaces.
std::vector<ChannelRef> channels_of(const std::vector<ColorSpace>& spaces);

}  // namespace texclass
