#pragma once

#include <vector>

#include "texclass/image.hpp"

namespace texclass {

/// The four canonical co-occurrence / run directions. With rows indexed
/// downward: 0 deg = (0,+1), 45 deg = (-1,+1), 90 deg = (-1,0),
/// 135 deg = (-1,-1).
enum class Angle { Deg0 = 0, Deg45 = 45, Deg90 = 90, Deg135 = 135 };

inline constexpr Angle kAngles[4] = {Angle::Deg0, Angle::Deg45, Angle::Deg90, Angle::Deg135};

/// (dy, dx) unit step for an angle.
std::pair<int, int> angle_step(Angle theta);

/// Normalized symmetric gray-level co-occurrence matrix.
struct CooccurrenceMatrix {
    int levels = 0;
    Angle theta = Angle::Deg0;
    int delta = 1;
    std::vector<double> p;  // levels x levels, row-major, sums to 1

    double at(int i, int j) const { return p[static_cast<size_t>(i) * levels + j]; }
    double& at(int i, int j) { return p[static_cast<size_t>(i) * levels + j]; }
};

/// The eight second-order statistics of a normalized co-occurrence matrix.
/// COR is undefined when a marginal variance vanishes; it is then reported
/// as 0 with `degenerate_cor` set.
struct HaralickFeatures {
    double contrast = 0;        // CON: sum p(i,j) (i-j)^2
    double correlation = 0;     // COR: sum (i-mu_i)(j-mu_j) p / (s_i s_j)
    double energy = 0;          // ENG: sum p^2
    double entropy = 0;         // ENT: -sum p ln p
    double homogeneity = 0;     // HOM: sum p / (1 + |i-j|)
    double dissimilarity = 0;   // DIS: sum p |i-j|
    double idm = 0;             // IDM: sum p / (1 + (i-j)^2)
    double max_probability = 0; // MP : max p
    bool degenerate_cor = false;
};

/// Counts pixel pairs at displacement (delta, theta), accumulating both
/// (i,j) and (j,i), then normalizes to sum 1. Throws if no pair fits.
CooccurrenceMatrix glcm(const QuantizedImage& img, int delta, Angle theta);

HaralickFeatures haralick(const CooccurrenceMatrix& cm);

}  // namespace texclass
