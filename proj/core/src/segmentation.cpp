#include "texclass/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "texclass/errors.hpp"

namespace texclass {

namespace {

void check_rect(int width, int height, const PixelRect& rect) {
    if (rect.w < 1 || rect.h < 1) throw DataError("sample rectangle is empty");
    if (rect.x < 0 || rect.y < 0 || rect.x + rect.w > width || rect.y + rect.h > height)
        throw DataError("sample rectangle leaves the image");
}

// Univariate summary of the plane values selected by the mask.
bool masked_summary(const GrayImage& plane, const BinaryMask& mask, GaussianSummary& out) {
    std::size_t count = 0;
    double mean = 0.0;
    for (int y = 0; y < plane.height; ++y)
        for (int x = 0; x < plane.width; ++x)
            if (mask.at(y, x)) {
                mean += plane.at(y, x);
                ++count;
            }
    if (count == 0) return false;
    mean /= static_cast<double>(count);
    double ss = 0.0;
    for (int y = 0; y < plane.height; ++y)
        for (int x = 0; x < plane.width; ++x)
            if (mask.at(y, x)) {
                const double d = plane.at(y, x) - mean;
                ss += d * d;
            }
    out.mean = Eigen::VectorXd::Constant(1, mean);
    out.cov = Eigen::MatrixXd::Constant(1, 1, ss / static_cast<double>(count));
    out.prior = static_cast<double>(count) / static_cast<double>(plane.pixel_count());
    return true;
}

Eigen::MatrixXd regularized(const Eigen::MatrixXd& cov) {
    Eigen::MatrixXd r = cov;
    const double eps = 1e-9 * std::max(1.0, r.trace());
    r.diagonal().array() += eps;
    return r;
}

double log_det_llt(const Eigen::MatrixXd& m, const char* what) {
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success)
        throw DegeneracyError(std::string(what) + " covariance is not positive definite");
    return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

}  // namespace

RegionStats region_stats(const ColorImage& img, const PixelRect& rect) {
    check_rect(img.width, img.height, rect);
    RegionStats out;
    const double n = static_cast<double>(rect.w) * rect.h;
    for (int c = 0; c < 3; ++c) {
        double mean = 0.0;
        for (int y = rect.y; y < rect.y + rect.h; ++y)
            for (int x = rect.x; x < rect.x + rect.w; ++x) mean += img.at(c, y, x);
        mean /= n;
        double ss = 0.0;
        for (int y = rect.y; y < rect.y + rect.h; ++y)
            for (int x = rect.x; x < rect.x + rect.w; ++x) {
                const double d = img.at(c, y, x) - mean;
                ss += d * d;
            }
        out.mean[c] = mean;
        out.sigma[c] = std::sqrt(ss / n);
    }
    return out;
}

void rect_stats(const GrayImage& plane, const PixelRect& rect, double& mean, double& sigma) {
    check_rect(plane.width, plane.height, rect);
    const double n = static_cast<double>(rect.w) * rect.h;
    mean = 0.0;
    for (int y = rect.y; y < rect.y + rect.h; ++y)
        for (int x = rect.x; x < rect.x + rect.w; ++x) mean += plane.at(y, x);
    mean /= n;
    double ss = 0.0;
    for (int y = rect.y; y < rect.y + rect.h; ++y)
        for (int x = rect.x; x < rect.x + rect.w; ++x) {
            const double d = plane.at(y, x) - mean;
            ss += d * d;
        }
    sigma = std::sqrt(ss / n);
}

BinaryMask box_segment(const GrayImage& channel, double mean, double sigma, double factor) {
    if (!(factor > 0.0)) throw std::invalid_argument("box_segment: factor must be positive");
    if (sigma < 0.0) throw std::invalid_argument("box_segment: negative sigma");
    const double lo = mean - factor * sigma;
    const double hi = mean + factor * sigma;
    BinaryMask mask(channel.width, channel.height);
    for (int y = 0; y < channel.height; ++y)
        for (int x = 0; x < channel.width; ++x) {
            const double v = channel.at(y, x);
            mask.at(y, x) = (v >= lo && v <= hi) ? 1 : 0;
        }
    return mask;
}

BhattacharyyaResult bhattacharyya(const GaussianSummary& p, const GaussianSummary& q) {
    if (p.mean.size() != q.mean.size() || p.cov.rows() != p.mean.size() ||
        q.cov.rows() != q.mean.size() || p.cov.rows() != p.cov.cols() || q.cov.rows() != q.cov.cols())
        throw std::invalid_argument("bhattacharyya: dimension mismatch");
    if (p.prior < 0.0 || p.prior > 1.0 || q.prior < 0.0 || q.prior > 1.0)
        throw std::invalid_argument("bhattacharyya: priors must lie in [0,1]");

    const Eigen::MatrixXd s1 = regularized(p.cov);
    const Eigen::MatrixXd s2 = regularized(q.cov);
    const Eigen::MatrixXd m = 0.5 * (s1 + s2);
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success)
        throw DegeneracyError("bhattacharyya: pooled covariance is singular");
    const Eigen::VectorXd d = p.mean - q.mean;
    const double quad = d.dot(llt.solve(d));
    const double log_det_m = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
    const double log_det_1 = log_det_llt(s1, "first");
    const double log_det_2 = log_det_llt(s2, "second");

    BhattacharyyaResult out;
    out.b = 0.125 * quad + 0.5 * (log_det_m - 0.5 * (log_det_1 + log_det_2));
    out.p_error = std::sqrt(p.prior * q.prior) * std::exp(-out.b);
    return out;
}

ChannelRanking rank_channels(const std::vector<ChannelSample>& samples,
                             const std::vector<ColorSpace>& spaces, double factor) {
    if (samples.empty()) throw DataError("rank_channels: no samples given");
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& s = samples[i];
        if (s.reference.width != s.image.width || s.reference.height != s.image.height)
            throw DataError("rank_channels: reference mask of sample " + std::to_string(i) +
                            " does not match the image size");
        check_rect(s.image.width, s.image.height, s.rect);
    }

    ChannelRanking out;
    for (const ChannelRef& ch : channels_of(spaces)) {
        double sum_err = 0.0;
        std::string note;
        for (std::size_t i = 0; i < samples.size() && note.empty(); ++i) {
            const auto& s = samples[i];
            const GrayImage plane = extract_channel(s.image, ch);
            double mean = 0.0, sigma = 0.0;
            rect_stats(plane, s.rect, mean, sigma);
            const BinaryMask seg = box_segment(plane, mean, sigma, factor);

            GaussianSummary seg_sum, ref_sum;
            if (!masked_summary(plane, seg, seg_sum)) {
                note = "segmentation selected no pixels in sample " + std::to_string(i);
                break;
            }
            if (!masked_summary(plane, s.reference, ref_sum)) {
                note = "reference mask selects no pixels in sample " + std::to_string(i);
                break;
            }
            sum_err += bhattacharyya(seg_sum, ref_sum).p_error;
        }
        ChannelScore score;
        score.channel = ch;
        if (note.empty()) {
            score.p_error = sum_err / static_cast<double>(samples.size());
            out.ranked.push_back(score);
        } else {
            score.note = note;
            out.excluded.push_back(score);
        }
    }
    std::stable_sort(out.ranked.begin(), out.ranked.end(),
                     [](const ChannelScore& a, const ChannelScore& b) { return a.p_error < b.p_error; });
    return out;
}

void write_ranking_csv(const std::string& path, const ChannelRanking& ranking) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open " + path + " for writing");
    out << "channel,p_error,status,note\n";
    char buf[64];
    for (const auto& s : ranking.ranked) {
        std::snprintf(buf, sizeof(buf), "%.17g", s.p_error);
        out << channel_name(s.channel) << ',' << buf << ",ok,\n";
    }
    for (const auto& s : ranking.excluded)
        out << channel_name(s.channel) << ",nan,excluded," << s.note << '\n';
    if (!out) throw DataError("write failed: " + path);
}

}  // namespace texclass
