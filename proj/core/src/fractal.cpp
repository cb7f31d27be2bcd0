#include "texclass/fractal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace texclass {
namespace {

struct Offset {
    int dy;
    int dx;
    int bin;  // 1-based distance bin
};

// Unique unordered-pair representatives: dy > 0, or dy == 0 with dx > 0.
std::vector<Offset> make_offsets(int max_scale) {
    std::vector<Offset> offs;
    const double limit = max_scale + 0.5;
    for (int dx = 1; dx * dx < limit * limit; ++dx) offs.push_back({0, dx, dx});
    for (int dy = 1; dy < limit; ++dy) {
        for (int dx = -max_scale; dx <= max_scale; ++dx) {
            const double d = std::hypot(static_cast<double>(dy), static_cast<double>(dx));
            if (d >= limit) continue;
            const int bin = static_cast<int>(std::floor(d + 0.5));
            if (bin >= 1 && bin <= max_scale) offs.push_back({dy, dx, bin});
        }
    }
    return offs;
}

}  // namespace

FdImage fbm_fd_image(const GrayImage& img, const FdOptions& opt) {
    if (opt.window < 5 || opt.window % 2 == 0)
        throw std::invalid_argument("fbm_fd_image: window must be odd and >= 5");
    if (opt.max_scale < 2) throw std::invalid_argument("fbm_fd_image: max_scale must be >= 2");
    if (img.data.empty()) throw std::invalid_argument("fbm_fd_image: empty image");

    const int w = img.width, h = img.height;
    const int hw = opt.window / 2;
    const size_t n = img.data.size();
    const auto offsets = make_offsets(opt.max_scale);

    // Per-scale accumulators of pair |difference| sums and pair counts.
    std::vector<std::vector<double>> sums(opt.max_scale + 1, std::vector<double>(n, 0.0));
    std::vector<std::vector<std::int64_t>> counts(opt.max_scale + 1, std::vector<std::int64_t>(n, 0));

    // One difference plane per offset, queried through an integral image so
    // each pixel's window sum is four lookups instead of a pair loop.
    std::vector<double> integ(static_cast<size_t>(w + 1) * (h + 1), 0.0);
    const int iw = w + 1;

    for (const auto& off : offsets) {
        const int cl = std::max(0, -off.dx);          // valid difference columns
        const int ch = w - 1 - std::max(0, off.dx);
        const int rh = h - 1 - off.dy;                // valid difference rows (dy >= 0)
        if (ch < cl || rh < 0) continue;

        for (int y = 0; y <= rh; ++y) {
            const double* row = img.data.data() + static_cast<size_t>(y) * w;
            const double* row2 = img.data.data() + static_cast<size_t>(y + off.dy) * w + off.dx;
            double* irow = integ.data() + static_cast<size_t>(y + 1) * iw;
            const double* iprev = integ.data() + static_cast<size_t>(y) * iw;
            double acc = 0.0;
            for (int x = 0; x < w; ++x) {
                if (x >= cl && x <= ch) acc += std::abs(row[x] - row2[x]);
                irow[x + 1] = iprev[x + 1] + acc;
            }
        }
        // Rows past rh contribute nothing; extend the running totals.
        for (int y = rh + 1; y < h; ++y) {
            double* irow = integ.data() + static_cast<size_t>(y + 1) * iw;
            const double* iprev = integ.data() + static_cast<size_t>(y) * iw;
            std::copy(iprev, iprev + iw, irow);
        }

        auto& sum_plane = sums[off.bin];
        auto& cnt_plane = counts[off.bin];
        for (int cy = 0; cy < h; ++cy) {
            const int wy0 = std::max(0, cy - hw);
            const int wy1 = std::min(h - 1, cy + hw);
            const int ry0 = wy0;
            const int ry1 = std::min(wy1 - off.dy, rh);
            if (ry1 < ry0) continue;
            const double* itop = integ.data() + static_cast<size_t>(ry0) * iw;
            const double* ibot = integ.data() + static_cast<size_t>(ry1 + 1) * iw;
            const std::int64_t rows = ry1 - ry0 + 1;
            for (int cx = 0; cx < w; ++cx) {
                const int wx0 = std::max(0, cx - hw);
                const int wx1 = std::min(w - 1, cx + hw);
                const int rx0 = std::max(wx0 + std::max(0, -off.dx), cl);
                const int rx1 = std::min(wx1 - std::max(0, off.dx), ch);
                if (rx1 < rx0) continue;
                const double s = ibot[rx1 + 1] - ibot[rx0] - itop[rx1 + 1] + itop[rx0];
                const size_t idx = static_cast<size_t>(cy) * w + cx;
                sum_plane[idx] += s;
                cnt_plane[idx] += rows * (rx1 - rx0 + 1);
            }
        }
    }

    FdImage out;
    out.width = w;
    out.height = h;
    out.fd.assign(n, 2.0);
    out.flagged.assign(n, 0);

    std::vector<double> log_r(opt.max_scale + 1, 0.0);
    for (int r = 1; r <= opt.max_scale; ++r) log_r[r] = std::log(static_cast<double>(r));

    for (size_t i = 0; i < n; ++i) {
        // Least-squares slope of log E(dI) against log dr over usable scales.
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int pts = 0;
        for (int r = 1; r <= opt.max_scale; ++r) {
            if (counts[r][i] <= 0) continue;
            const double e = sums[r][i] / static_cast<double>(counts[r][i]);
            if (e <= 0.0) continue;
            const double lx = log_r[r], ly = std::log(e);
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
            ++pts;
        }
        if (pts < 2) {
            out.flagged[i] = 1;
            ++out.flagged_count;
            continue;  // fd stays at the smooth-surface 2.0
        }
        const double denom = pts * sxx - sx * sx;
        double hurst = denom != 0.0 ? (pts * sxy - sx * sy) / denom : 1.0;
        hurst = std::clamp(hurst, 0.0, 1.0);
        out.fd[i] = 3.0 - hurst;
    }
    return out;
}

FdStats fd_stats(const FdImage& fd) {
    if (fd.fd.empty()) throw std::invalid_argument("fd_stats: empty FD image");
    const double n = static_cast<double>(fd.fd.size());

    FdStats s;
    for (double v : fd.fd) s.mean += v;
    s.mean /= n;
    double m2 = 0, m3 = 0, m4 = 0;
    for (double v : fd.fd) {
        const double d = v - s.mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    s.variance = m2;
    s.lacunarity = s.mean > 0.0 ? s.variance / s.mean : 0.0;
    if (m2 <= 0.0) {
        s.degenerate = true;  // skewness/kurtosis undefined on a flat map
    } else {
        s.skewness = m3 / std::pow(m2, 1.5);
        s.kurtosis = m4 / (m2 * m2);
    }
    return s;
}

}  // namespace texclass
