#include "texclass/wilcoxon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace texclass {

WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("wilcoxon: paired lists differ in length");
    if (a.empty()) throw std::invalid_argument("wilcoxon: empty input");
    std::vector<double> diff;
    diff.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        if (!std::isfinite(d)) throw std::invalid_argument("wilcoxon: non-finite difference");
        if (d != 0.0) diff.push_back(d);
    }

    WilcoxonResult res;
    if (diff.empty()) {
        res.undefined = true;
        res.p_value = std::numeric_limits<double>::quiet_NaN();
        return res;
    }
    const int n = static_cast<int>(diff.size());
    if (n < 5) throw std::invalid_argument("wilcoxon: need at least 5 nonzero differences, got " +
                                           std::to_string(n));
    res.n = n;

    std::vector<int> idx(diff.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(),
              [&](int x, int y) { return std::fabs(diff[x]) < std::fabs(diff[y]); });

    // Doubled ranks stay integral under tie averaging: a run occupying
    // 1-based positions i+1..j shares rank (i+1+j)/2.
    std::vector<int> doubled_rank(diff.size(), 0);
    std::vector<int> tie_sizes;
    int dw = 0;  // doubled W
    for (int i = 0; i < n;) {
        int j = i + 1;
        while (j < n && std::fabs(diff[idx[j]]) == std::fabs(diff[idx[i]])) ++j;
        const int dr = i + j + 1;
        for (int k = i; k < j; ++k) doubled_rank[idx[k]] = dr;
        tie_sizes.push_back(j - i);
        i = j;
    }
    for (int i = 0; i < n; ++i)
        if (diff[i] > 0.0) dw += doubled_rank[i];
    res.w = dw / 2.0;

    if (n <= 25) {
        res.exact = true;
        const int max_sum = n * (n + 1);  // doubled total
        std::vector<double> dp(max_sum + 1, 0.0);
        dp[0] = 1.0;
        for (int i = 0; i < n; ++i) {
            const int r = doubled_rank[i];
            for (int s = max_sum; s >= r; --s) dp[s] += dp[s - r];
        }
        const double denom = std::ldexp(1.0, n);  // 2^n assignments
        double lo = 0.0, hi = 0.0;
        for (int s = 0; s <= max_sum; ++s) {
            if (s <= dw) lo += dp[s];
            if (s >= dw) hi += dp[s];
        }
        res.p_value = std::min(1.0, 2.0 * std::min(lo, hi) / denom);
    } else {
        const double nn = static_cast<double>(n);
        const double mu = nn * (nn + 1.0) / 4.0;
        double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0;
        for (int t : tie_sizes) {
            const double td = static_cast<double>(t);
            var -= (td * td * td - td) / 48.0;
        }
        const double z = (res.w - mu) / std::sqrt(var);
        res.p_value = std::min(1.0, std::erfc(std::fabs(z) / std::sqrt(2.0)));
    }
    return res;
}

}  // namespace texclass
