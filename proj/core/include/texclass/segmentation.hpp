#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "texclass/color.hpp"
#include "texclass/image.hpp"

namespace texclass {

/// Per-channel population mean and standard deviation of a sample patch.
struct RegionStats {
    std::array<double, 3> mean{};
    std::array<double, 3> sigma{};
};

struct GaussianSummary {
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;
    double prior = 1.0;
};

struct BhattacharyyaResult {
    double b = 0.0;
    double p_error = 0.0;
};

struct ChannelScore {
    ChannelRef channel;
    double p_error = 0.0;
    std::string note;  // diagnostic when the channel was excluded
};

/// Channels ordered by ascending error bound; channels whose segmentation or
/// reference selected no pixels in some sample are listed separately.
struct ChannelRanking {
    std::vector<ChannelScore> ranked;
    std::vector<ChannelScore> excluded;
};

/// One operator-marked example: the image, the nucleus sample patch, and a
/// reference mask of the true nuclei.
struct ChannelSample {
    ColorImage image;
    PixelRect rect;
    BinaryMask reference;
};

RegionStats region_stats(const ColorImage& img, const PixelRect& rect);

/// Population mean/stddev of one plane over a patch (the per-channel analogue
/// of region_stats for converted color planes).
void rect_stats(const GrayImage& plane, const PixelRect& rect, double& mean, double& sigma);

/// mask = 1 iff value lies in the closed interval [mean - factor*sigma,
/// mean + factor*sigma].
BinaryMask box_segment(const GrayImage& channel, double mean, double sigma, double factor = 1.25);

/// Standard Gaussian Bhattacharyya distance with the averaged covariance
/// (S1+S2)/2 and the error bound sqrt(P1 P2) exp(-B). Covariances get
/// 1e-9*max(1,trace) added to the diagonal before factorization.
BhattacharyyaResult bhattacharyya(const GaussianSummary& p, const GaussianSummary& q);

/// For every channel of every requested space: box-segment each sample around
/// its patch stats, summarize the intensity populations picked by the produced
/// mask and by the reference mask as univariate Gaussians with pixel-fraction
/// priors, and average the Bhattacharyya error bound over samples.
ChannelRanking rank_channels(const std::vector<ChannelSample>& samples,
                             const std::vector<ColorSpace>& spaces, double factor = 1.25);

void write_ranking_csv(const std::string& path, const ChannelRanking& ranking);

}  // namespace texclass
