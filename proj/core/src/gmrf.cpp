#include "texclass/gmrf.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace texclass {

const std::array<NeighborhoodSpec::Pair, NeighborhoodSpec::kTerms>& NeighborhoodSpec::offsets() {
    static const std::array<Pair, kTerms> k = {{
        {{{0, -1}, {0, 1}}},    // horizontal +-1
        {{{-1, 0}, {1, 0}}},    // vertical +-1
        {{{0, -2}, {0, 2}}},    // horizontal +-2
        {{{-2, 0}, {2, 0}}},    // vertical +-2
        {{{-1, -1}, {1, 1}}},   // main diagonal
        {{{-1, 1}, {1, -1}}},   // anti-diagonal
    }};
    return k;
}

GmrfParams gmrf_estimate(const GrayImage& img) {
    constexpr int n = NeighborhoodSpec::kTerms;
    if (img.width < 5 || img.height < 5)
        throw std::invalid_argument("gmrf_estimate: image must be at least 5x5");

    const double mean = std::accumulate(img.data.begin(), img.data.end(), 0.0) /
                        static_cast<double>(img.data.size());

    const auto& nb = NeighborhoodSpec::offsets();
    const int w = img.width;
    auto centered = [&](int y, int x) { return img.at(y, x) - mean; };

    Eigen::Matrix<double, n, n> a = Eigen::Matrix<double, n, n>::Zero();
    Eigen::Matrix<double, n, 1> b = Eigen::Matrix<double, n, 1>::Zero();

    for (int y = 2; y < img.height - 2; ++y) {
        for (int x = 2; x < w - 2; ++x) {
            Eigen::Matrix<double, n, 1> s;
            for (int l = 0; l < n; ++l) {
                const auto& [o1, o2] = nb[l];
                s(l) = centered(y + o1.first, x + o1.second) + centered(y + o2.first, x + o2.second);
            }
            a.noalias() += s * s.transpose();
            b.noalias() += centered(y, x) * s;
        }
    }

    GmrfParams out;
    Eigen::FullPivLU<Eigen::Matrix<double, n, n>> lu(a);
    if (lu.rank() < n) {
        const double tr = a.trace();
        a.diagonal().array() += 1e-9 * tr;
        lu.compute(a);
        if (tr <= 0.0 || lu.rank() < n) {
            out.degenerate = true;
            return out;  // alpha = 0, sigma = 0
        }
    }
    const Eigen::Matrix<double, n, 1> alpha = lu.solve(b);
    for (int l = 0; l < n; ++l) out.alpha[l] = alpha(l);

    // Residual pass over the same interior pixels; denominator is the true
    // interior count (a 2-pixel reach leaves (H-4)(W-4) usable pixels).
    double ss = 0.0;
    long long count = 0;
    for (int y = 2; y < img.height - 2; ++y) {
        for (int x = 2; x < w - 2; ++x) {
            double pred = 0.0;
            for (int l = 0; l < n; ++l) {
                const auto& [o1, o2] = nb[l];
                pred += out.alpha[l] *
                        (centered(y + o1.first, x + o1.second) + centered(y + o2.first, x + o2.second));
            }
            const double r = centered(y, x) - pred;
            ss += r * r;
            ++count;
        }
    }
    out.sigma = count > 0 ? std::sqrt(ss / static_cast<double>(count)) : 0.0;
    return out;
}

}  // namespace texclass
