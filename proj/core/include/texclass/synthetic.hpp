#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "texclass/features.hpp"
#include "texclass/image.hpp"

namespace texclass {

/// Bean-shaped blob series: image i (1-based) holds base_count*i shapes, so
/// structural frequency rises along the series while everything else is held.
struct SceneSpec {
    int base_count = 10;
    int length = 15;
    int width = 512;
    int height = 512;
    double major_min = 6.0;    // ellipse semi-major axis, pixels
    double major_max = 10.0;
    double aspect_min = 0.45;  // semi-minor / semi-major
    double aspect_max = 0.6;
    double bend_min = 0.1;     // spine displacement as a fraction of the major axis
    double bend_max = 0.35;
    double foreground = 70.0;  // shape fill (dark)
    double background = 200.0;
    bool non_overlap = true;
    int max_attempts = 400;    // placement tries per shape before giving up
    std::uint64_t seed = 1;
};

/// Bright crack-like random-walk polylines stamped over an image.
struct CraquelureSpec {
    int cracks = 20;
    int steps = 250;        // unit steps per crack
    int line_width = 2;     // 1 or 2 pixels
    double intensity = 245.0;
    double turn = 0.35;     // max heading change per step, radians
    std::uint64_t seed = 1;
};

/// sigma/mu of each measure's normalized features, per image of a series.
struct SusceptibilityProfile {
    std::vector<Measure> measures;
    int images = 0;
    std::vector<double> ratios;          // images x measures, row-major; NaN when flagged
    std::vector<std::uint8_t> flagged;   // mean below 1e-12, or every feature constant
    std::vector<std::string> constant_features;  // normalized to the 0.5 midpoint

    double at(int image, int m) const { return ratios[static_cast<std::size_t>(image) * measures.size() + m]; }
    bool flag(int image, int m) const { return flagged[static_cast<std::size_t>(image) * measures.size() + m] != 0; }
    /// max - min of the ratio over images, skipping flagged entries.
    double range(int m) const;
};

/// Deterministic in spec.seed; image i is generated from its own derived seed
/// so images are independent of each other. Throws when a shape cannot be
/// placed within max_attempts (message names the 1-based image index).
std::vector<GrayImage> generate_series(const SceneSpec& spec);

/// Identity for cracks == 0; otherwise stamps crack pixels at spec.intensity
/// and leaves every other pixel untouched.
GrayImage apply_craquelure(const GrayImage& img, const CraquelureSpec& spec);

/// Morphological gradient (square SE of se_size) -> feature extraction ->
/// per-feature min-max normalization across the series -> per (image,
/// measure) sigma/mu over that measure's normalized features.
SusceptibilityProfile susceptibility(const std::vector<GrayImage>& series,
                                     const std::vector<Measure>& measures, int se_size = 5,
                                     const ExtractorConfig& cfg = {});

/// Rows of (image index, measure, ratio, flagged).
void write_susceptibility_csv(const std::string& path, const SusceptibilityProfile& prof);

/// Line chart of ratio vs image index, one series per measure.
void write_susceptibility_svg(const std::string& path, const SusceptibilityProfile& prof,
                              const std::string& title);

}  // namespace texclass
