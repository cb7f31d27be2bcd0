#pragma once

// Feature-selection fixture shared by the unit suite and the acceptance
// runner: 4 independent "generator" columns with distinct class-variance
// disparities plus 33 rescaled low-noise copies of them. Correlation
// pruning at 0.8 must keep exactly the generators: every copy correlates
// near 1 with its generator, and a copy's divergence is strictly below its
// generator's (shrinking sigma by a common factor a < 1 scales the score
// by (1 + a s) / (1 + s) < 1 per class pair), so the generator is always
// visited first.

#include <random>
#include <string>
#include <vector>

#include "texclass/features.hpp"

namespace fixtures {

inline texclass::FeatureMatrix selection_fixture(std::uint64_t seed = 2024) {
    const int per_class = 30;
    const int rows = 2 * per_class;
    const double sigma_a[4] = {1.0, 1.0, 2.0, 1.5};
    const double sigma_b[4] = {3.0, 2.5, 4.0, 2.5};
    const int copies[4] = {9, 8, 8, 8};

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    std::vector<std::vector<double>> gen(4, std::vector<double>(rows));
    for (int i = 0; i < 4; ++i)
        for (int r = 0; r < rows; ++r)
            gen[i][r] = (r < per_class ? sigma_a[i] : sigma_b[i]) * gauss(rng);

    texclass::FeatureMatrix m;
    for (int r = 0; r < rows; ++r) {
        m.labels.push_back(r < per_class ? "A" : "B");
        m.groups.push_back("g" + std::to_string(r % 5));
        m.row_ids.push_back("row" + std::to_string(r));
    }

    std::vector<std::vector<double>> cols;
    for (int i = 0; i < 4; ++i) {
        m.feature_names.push_back("gen" + std::to_string(i + 1));
        cols.push_back(gen[i]);
        const double noise = 0.02 * 0.5 * (sigma_a[i] + sigma_b[i]);
        for (int j = 0; j < copies[i]; ++j) {
            const double scale = 0.5 + 0.4 * double(j) / double(copies[i] - 1);
            m.feature_names.push_back("gen" + std::to_string(i + 1) + ".copy" + std::to_string(j + 1));
            std::vector<double> col(rows);
            for (int r = 0; r < rows; ++r) col[r] = scale * gen[i][r] + noise * gauss(rng);
            cols.push_back(std::move(col));
        }
    }

    m.values.resize(static_cast<size_t>(rows) * cols.size());
    for (int r = 0; r < rows; ++r)
        for (size_t c = 0; c < cols.size(); ++c)
            m.values[static_cast<size_t>(r) * cols.size() + c] = cols[c][r];
    m.validate();
    return m;
}

}  // namespace fixtures
