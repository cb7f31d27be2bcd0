#pragma once

#include <vector>

namespace texclass {

struct WilcoxonResult {
    double w = 0.0;          // sum of ranks of positive differences
    double p_value = 1.0;    // two-sided; NaN when undefined
    int n = 0;               // pairs left after dropping zero differences
    bool exact = false;      // exact distribution (n <= 25) vs normal approximation
    bool undefined = false;  // every difference was zero
};

/// Paired two-sided signed-rank test of a vs b. Zero differences are dropped,
/// tied |differences| get averaged ranks. Exact p for n <= 25 (enumeration via
/// a subset-sum table over doubled ranks), otherwise a normal approximation
/// with the usual tie variance correction. Fewer than 5 nonzero differences
/// is an error unless all differences are zero, which is flagged instead.
WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace texclass
