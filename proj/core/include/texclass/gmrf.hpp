#pragma once

#include <array>
#include <utility>

#include "texclass/image.hpp"

namespace texclass {

/// The six symmetric pixel-pair offset sets of the third-order Markov
/// neighborhood, each entry holding the two (dy, dx) offsets summed into
/// one regressor: horizontal +-1, vertical +-1, horizontal +-2,
/// vertical +-2, main diagonal, anti-diagonal.
struct NeighborhoodSpec {
    using Pair = std::array<std::pair<int, int>, 2>;
    static constexpr int kTerms = 6;
    static const std::array<Pair, kTerms>& offsets();
};

/// Interaction weights and conditional standard deviation of the field.
struct GmrfParams {
    std::array<double, 6> alpha{};  // one weight per symmetric pair sum
    double sigma = 0.0;
    bool degenerate = false;  // normal matrix singular even after regularization
};

/// Least-squares fit of the six interaction weights over all interior
/// pixels (2-pixel margin), on the mean-centered image. sigma is the RMS
/// residual over the same pixels. Constant images yield the degenerate
/// all-zero result.
GmrfParams gmrf_estimate(const GrayImage& img);

}  // namespace texclass
