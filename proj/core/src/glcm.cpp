#include "texclass/glcm.hpp"

#include <cmath>
#include <stdexcept>

namespace texclass {

std::pair<int, int> angle_step(Angle theta) {
    switch (theta) {
        case Angle::Deg0: return {0, 1};
        case Angle::Deg45: return {-1, 1};
        case Angle::Deg90: return {-1, 0};
        case Angle::Deg135: return {-1, -1};
    }
    throw std::invalid_argument("bad angle");
}

CooccurrenceMatrix glcm(const QuantizedImage& img, int delta, Angle theta) {
    if (delta < 1) throw std::invalid_argument("glcm: delta must be >= 1");
    const auto [sy, sx] = angle_step(theta);
    const int dy = sy * delta, dx = sx * delta;

    CooccurrenceMatrix cm;
    cm.levels = img.levels;
    cm.theta = theta;
    cm.delta = delta;
    cm.p.assign(static_cast<size_t>(img.levels) * img.levels, 0.0);

    long long pairs = 0;
    for (int y = 0; y < img.height; ++y) {
        const int y2 = y + dy;
        if (y2 < 0 || y2 >= img.height) continue;
        for (int x = 0; x < img.width; ++x) {
            const int x2 = x + dx;
            if (x2 < 0 || x2 >= img.width) continue;
            const int i = img.at(y, x), j = img.at(y2, x2);
            cm.at(i, j) += 1.0;
            cm.at(j, i) += 1.0;
            ++pairs;
        }
    }
    if (pairs == 0)
        throw std::invalid_argument("glcm: image too small for displacement delta=" + std::to_string(delta));

    const double norm = 1.0 / (2.0 * static_cast<double>(pairs));
    for (double& v : cm.p) v *= norm;
    return cm;
}

HaralickFeatures haralick(const CooccurrenceMatrix& cm) {
    const int g = cm.levels;
    double total = 0;
    for (double v : cm.p) total += v;
    if (std::abs(total - 1.0) > 1e-6) throw std::invalid_argument("haralick: matrix is not normalized");

    // Marginals (symmetric matrix, so both marginals coincide, but
    // compute them separately to keep the formulas literal).
    std::vector<double> pi(g, 0.0), pj(g, 0.0);
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j) {
            pi[i] += cm.at(i, j);
            pj[j] += cm.at(i, j);
        }
    double mu_i = 0, mu_j = 0;
    for (int i = 0; i < g; ++i) mu_i += i * pi[i];
    for (int j = 0; j < g; ++j) mu_j += j * pj[j];
    double var_i = 0, var_j = 0;
    for (int i = 0; i < g; ++i) var_i += (i - mu_i) * (i - mu_i) * pi[i];
    for (int j = 0; j < g; ++j) var_j += (j - mu_j) * (j - mu_j) * pj[j];

    HaralickFeatures f;
    double cov = 0;
    for (int i = 0; i < g; ++i) {
        for (int j = 0; j < g; ++j) {
            const double p = cm.at(i, j);
            if (p <= 0.0) continue;
            const double d = static_cast<double>(i - j);
            f.contrast += p * d * d;
            f.energy += p * p;
            f.entropy -= p * std::log(p);
            f.homogeneity += p / (1.0 + std::abs(d));
            f.dissimilarity += p * std::abs(d);
            f.idm += p / (1.0 + d * d);
            f.max_probability = std::max(f.max_probability, p);
            cov += (i - mu_i) * (j - mu_j) * p;
        }
    }
    if (var_i <= 1e-12 || var_j <= 1e-12) {
        f.correlation = 0.0;  // constant-tile matrices occur after gradient preprocessing
        f.degenerate_cor = true;
    } else {
        f.correlation = cov / std::sqrt(var_i * var_j);
    }
    return f;
}

}  // namespace texclass
