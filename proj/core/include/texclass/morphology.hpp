#pragma once

#include <utility>
#include <vector>

#include "texclass/image.hpp"

namespace texclass {

/// Flat structuring element given as an offset support set centered on the
/// origin. Flat means the additive term is zero, so dilation and erosion
/// reduce to a domain-restricted max/min over the support.
struct StructuringElement {
    std::vector<std::pair<int, int>> support;  // (dy, dx) offsets
    int width = 0;
    int height = 0;

    /// Full odd square of ones, e.g. square(5) for the default 5x5 element.
    static StructuringElement square(int size);
};

/// Grayscale dilation: out(s,t) = max over support offsets (y,x) of
/// img(s-y, t-x), restricted to offsets landing inside the image.
GrayImage dilate(const GrayImage& img, const StructuringElement& se);

/// Grayscale erosion, the dual: min over img(s+y, t+x).
GrayImage erode(const GrayImage& img, const StructuringElement& se);

/// Morphological gradient: dilate minus erode, pointwise. Non-negative for
/// any flat element containing the origin.
GrayImage gradient(const GrayImage& img, const StructuringElement& se);

}  // namespace texclass
