#include "texclass/rlm.hpp"

#include <algorithm>
#include <stdexcept>

namespace texclass {

std::int64_t RunLengthMatrix::total_runs() const {
    std::int64_t n = 0;
    for (auto c : counts) n += c;
    return n;
}

namespace {

// Walks one line from (y, x) stepping (dy, dx), accumulating maximal runs.
void scan_line(const QuantizedImage& img, int y, int x, int dy, int dx, RunLengthMatrix& out) {
    int run_level = -1;
    int run_len = 0;
    while (y >= 0 && y < img.height && x >= 0 && x < img.width) {
        const int v = img.at(y, x);
        if (v == run_level) {
            ++run_len;
        } else {
            if (run_len > 0) ++out.at(run_level, run_len - 1);
            run_level = v;
            run_len = 1;
        }
        y += dy;
        x += dx;
    }
    if (run_len > 0) ++out.at(run_level, run_len - 1);
}

}  // namespace

RunLengthMatrix rlm(const QuantizedImage& img, Angle theta) {
    if (img.data.empty()) throw std::invalid_argument("rlm: empty image");

    RunLengthMatrix out;
    out.levels = img.levels;
    out.theta = theta;
    const bool diagonal = theta == Angle::Deg45 || theta == Angle::Deg135;
    out.max_run = diagonal ? std::min(img.width, img.height)
                           : (theta == Angle::Deg0 ? img.width : img.height);
    out.counts.assign(static_cast<size_t>(out.levels) * out.max_run, 0);

    switch (theta) {
        case Angle::Deg0:
            for (int y = 0; y < img.height; ++y) scan_line(img, y, 0, 0, 1, out);
            break;
        case Angle::Deg90:
            for (int x = 0; x < img.width; ++x) scan_line(img, 0, x, 1, 0, out);
            break;
        case Angle::Deg45:
            // Lines of constant y+x, walked up-right from their bottom-left end.
            for (int k = 0; k <= img.height + img.width - 2; ++k) {
                const int y0 = std::min(k, img.height - 1);
                const int x0 = k - y0;
                if (x0 >= img.width) continue;
                scan_line(img, y0, x0, -1, 1, out);
            }
            break;
        case Angle::Deg135:
            // Lines of constant y-x, walked up-left from their bottom-right end.
            for (int k = -(img.width - 1); k <= img.height - 1; ++k) {
                const int y0 = std::min(img.height - 1, img.width - 1 + k);
                const int x0 = y0 - k;
                if (x0 < 0 || x0 >= img.width) continue;
                scan_line(img, y0, x0, -1, -1, out);
            }
            break;
    }
    return out;
}

RlmFeatures rlm_features(const RunLengthMatrix& rl, std::int64_t pixel_count) {
    const double n_r = static_cast<double>(rl.total_runs());
    if (n_r < 1) throw std::invalid_argument("rlm_features: empty run-length matrix");
    if (pixel_count < 1) throw std::invalid_argument("rlm_features: pixel_count must be >= 1");

    RlmFeatures f;
    std::vector<double> by_level(rl.levels, 0.0), by_run(rl.max_run, 0.0);
    for (int l = 0; l < rl.levels; ++l) {
        const double i = static_cast<double>(l + 1);  // 1-based gray index
        for (int r = 0; r < rl.max_run; ++r) {
            const double p = static_cast<double>(rl.at(l, r));
            if (p == 0.0) continue;
            const double j = static_cast<double>(r + 1);
            by_level[l] += p;
            by_run[r] += p;
            f.sre += p / (j * j);
            f.lre += p * j * j;
            f.lglre += p / (i * i);
            f.hglre += p * i * i;
            f.srlgle += p / (i * i * j * j);
            f.srhgle += p * i * i / (j * j);
            f.lrlgle += p * j * j / (i * i);
            f.lrhgle += p * i * i * j * j;
        }
    }
    for (double s : by_level) f.gln += s * s;
    for (double s : by_run) f.rln += s * s;

    f.sre /= n_r;
    f.lre /= n_r;
    f.gln /= n_r;
    f.rln /= n_r;
    f.rp = n_r / static_cast<double>(pixel_count);
    f.lglre /= n_r;
    f.hglre /= n_r;
    f.srlgle /= n_r;
    f.srhgle /= n_r;
    f.lrlgle /= n_r;
    f.lrhgle /= n_r;
    return f;
}

}  // namespace texclass
