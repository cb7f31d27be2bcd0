#pragma once

#include <cstdint>
#include <vector>

#include "texclass/glcm.hpp"  // Angle
#include "texclass/image.hpp"

namespace texclass {

/// Gray-level run-length matrix: entry (i, j) counts maximal runs of gray
/// level i with length j+1 along lines of direction theta. The weighted
/// total sum_{i,j} count(i,j) * length(j) equals the pixel count.
struct RunLengthMatrix {
    int levels = 0;
    int max_run = 0;  // columns; longest possible run for this direction
    Angle theta = Angle::Deg0;
    std::vector<std::int64_t> counts;  // levels x max_run, row-major

    std::int64_t at(int level, int run_minus_1) const {
        return counts[static_cast<size_t>(level) * max_run + run_minus_1];
    }
    std::int64_t& at(int level, int run_minus_1) {
        return counts[static_cast<size_t>(level) * max_run + run_minus_1];
    }
    std::int64_t total_runs() const;
};

/// The eleven run-length statistics. Gray index i and run index j are
/// counted from 1 so the reciprocal-weighted features stay defined for the
/// lowest bin. n_r is the total run count.
struct RlmFeatures {
    double sre = 0;     // short run emphasis        sum p/j^2 / n_r
    double lre = 0;     // long run emphasis         sum p*j^2 / n_r
    double gln = 0;     // gray level non-uniformity sum_i (sum_j p)^2 / n_r
    double rln = 0;     // run length non-uniformity sum_j (sum_i p)^2 / n_r
    double rp = 0;      // run percentage            n_r / pixel_count
    double lglre = 0;   // low gray level run emph.  sum p/i^2 / n_r
    double hglre = 0;   // high gray level run emph. sum p*i^2 / n_r
    double srlgle = 0;  // short run low gray level  sum p/(i^2 j^2) / n_r
    double srhgle = 0;  // short run high gray level sum p*i^2/j^2 / n_r
    double lrlgle = 0;  // long run low gray level   sum p*j^2/i^2 / n_r
    double lrhgle = 0;  // long run high gray level  sum p*i^2*j^2 / n_r
};

/// Scans maximal equal-bin runs along every line of direction theta.
/// Diagonal directions traverse all diagonals of the image.
RunLengthMatrix rlm(const QuantizedImage& img, Angle theta);

RlmFeatures rlm_features(const RunLengthMatrix& rl, std::int64_t pixel_count);

}  // namespace texclass
