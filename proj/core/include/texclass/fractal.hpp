#pragma once

#include <cstdint>
#include <vector>

#include "texclass/image.hpp"

namespace texclass {

/// Per-pixel fractal dimension map; values live in [2, 3]. Pixels whose
/// window offered fewer than two usable scales carry the smooth-surface
/// value 2.0 and are flagged.
struct FdImage {
    int width = 0;
    int height = 0;
    std::vector<double> fd;
    std::vector<std::uint8_t> flagged;
    std::int64_t flagged_count = 0;

    double at(int y, int x) const { return fd[static_cast<size_t>(y) * width + x]; }
};

struct FdOptions {
    int window = 13;    // odd sliding-window side, >= 5
    int max_scale = 8;  // largest pair-distance bin, >= 2
};

/// First-order statistics of an FD image (population moments).
struct FdStats {
    double mean = 0;
    double variance = 0;
    double lacunarity = 0;  // variance / mean
    double skewness = 0;    // m3 / m2^1.5
    double kurtosis = 0;    // m4 / m2^2
    bool degenerate = false;  // zero variance: skew/kurt reported as 0
};

/// Sliding-window Hurst estimate: for every pixel, mean absolute intensity
/// difference of in-window pixel pairs is binned by Euclidean distance
/// (bin r covers [r-0.5, r+0.5)), the slope of log-mean-difference against
/// log-distance gives H (clamped to [0,1]), and the map records 3 - H.
/// Windows are clipped at the image border.
FdImage fbm_fd_image(const GrayImage& img, const FdOptions& opt = {});

FdStats fd_stats(const FdImage& fd);

}  // namespace texclass
