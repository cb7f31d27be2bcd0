#pragma once

#include <string>

#include "texclass/image.hpp"

namespace texclass {

/// Loads an 8-bit PNG, binary PGM (P5) or binary PPM (P6) file.
/// Grayscale sources are replicated into all three channels.
/// Throws DataError with the offending path on any decode problem.
ColorImage load_image(const std::string& path);

/// Binary PGM writer; values rounded and clamped to [0, 255].
void write_pgm(const std::string& path, const GrayImage& img);

/// Reads a gray plane from PNG/PGM/PPM (color sources are rejected unless
/// all channels agree).
GrayImage load_gray(const std::string& path);

/// Masks travel as PGM with 0/255 payload; >= 128 reads back as 1.
BinaryMask load_mask(const std::string& path);
void write_mask(const std::string& path, const BinaryMask& mask);

}  // namespace texclass
