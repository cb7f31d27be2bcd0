#pragma once

#include <string>
#include <vector>

#include "texclass/features.hpp"

namespace texclass {

/// Per-feature class-separability scores built from pairwise class
/// standard-deviation disparities, plus the descending-order permutation.
/// Features with zero standard deviation in any class are degenerate (the
/// score divides by sigma_k * sigma_l) and are left out of `order`.
struct DivergenceRanking {
    std::vector<double> divergence;     // per column; NaN when degenerate
    std::vector<std::uint8_t> degenerate;
    std::vector<int> order;             // column indices, descending divergence
};

/// Outcome of correlation-threshold pruning. kept is ordered by divergence;
/// every dropped feature records why it went.
struct SelectionResult {
    struct Dropped {
        std::string name;
        std::string reason;  // "correlated-with:<name>", "zero-correlation", "degenerate"
    };
    std::vector<std::string> kept;
    std::vector<Dropped> dropped;
};

/// D_i = sum over class pairs k<l of
///   (sigma_k - sigma_l)^2 (1 + sigma_k + sigma_l) / (2 sigma_k sigma_l)
/// with sigma the per-class population standard deviation of the feature.
/// Requires at least two classes with at least two samples each.
DivergenceRanking divergence(const FeatureMatrix& m);

/// Greedy forward walk in descending divergence: a feature is kept iff its
/// Pearson |r| with every already kept feature is <= threshold and nonzero
/// (|r| < 1e-12 counts as the paper's "correlation equal zero" exclusion).
SelectionResult prune(const FeatureMatrix& m, const DivergenceRanking& ranking, double threshold = 0.8);

/// Pearson correlation of two columns over all rows.
double pearson(const FeatureMatrix& m, int col_a, int col_b);

/// Table-style selection report: name, divergence, kept/dropped, reason.
void write_selection_csv(const std::string& path, const FeatureMatrix& m,
                         const DivergenceRanking& ranking, const SelectionResult& result);

}  // namespace texclass
