#include "texclass/selection.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>

#include "texclass/errors.hpp"

namespace texclass {

namespace {

std::vector<double> class_sigmas(const FeatureMatrix& m, int col,
                                 const std::vector<std::string>& labels,
                                 const std::map<std::string, std::vector<int>>& rows_of) {
    std::vector<double> sig;
    sig.reserve(labels.size());
    for (const auto& lab : labels) {
        const auto& rows = rows_of.at(lab);
        double mean = 0.0;
        for (int r : rows) mean += m.at(r, col);
        mean /= static_cast<double>(rows.size());
        double ss = 0.0;
        for (int r : rows) {
            const double d = m.at(r, col) - mean;
            ss += d * d;
        }
        sig.push_back(std::sqrt(ss / static_cast<double>(rows.size())));
    }
    return sig;
}

}  // namespace

DivergenceRanking divergence(const FeatureMatrix& m) {
    const auto labels = m.class_labels();
    if (labels.size() < 2) throw DataError("divergence needs at least two classes");
    std::map<std::string, std::vector<int>> rows_of;
    for (int r = 0; r < m.rows(); ++r) rows_of[m.labels[r]].push_back(r);
    for (const auto& lab : labels) {
        if (rows_of.at(lab).size() < 2)
            throw DataError("divergence: class " + lab + " has fewer than two samples");
    }

    DivergenceRanking out;
    out.divergence.assign(m.cols(), 0.0);
    out.degenerate.assign(m.cols(), 0);
    for (int c = 0; c < m.cols(); ++c) {
        const auto sig = class_sigmas(m, c, labels, rows_of);
        bool degen = false;
        for (double s : sig)
            if (s <= 0.0) degen = true;
        if (degen) {
            // the score divides by each class sigma, so it is undefined here
            out.degenerate[c] = 1;
            out.divergence[c] = std::numeric_limits<double>::quiet_NaN();
            continue;
        }
        double d = 0.0;
        for (std::size_t k = 0; k + 1 < sig.size(); ++k) {
            for (std::size_t l = k + 1; l < sig.size(); ++l) {
                const double diff = sig[k] - sig[l];
                d += diff * diff * (1.0 + sig[k] + sig[l]) / (2.0 * sig[k] * sig[l]);
            }
        }
        out.divergence[c] = d;
    }
    for (int c = 0; c < m.cols(); ++c)
        if (!out.degenerate[c]) out.order.push_back(c);
    std::stable_sort(out.order.begin(), out.order.end(), [&](int a, int b) {
        if (out.divergence[a] != out.divergence[b]) return out.divergence[a] > out.divergence[b];
        return a < b;
    });
    return out;
}

double pearson(const FeatureMatrix& m, int col_a, int col_b) {
    const int n = m.rows();
    double ma = 0.0, mb = 0.0;
    for (int r = 0; r < n; ++r) {
        ma += m.at(r, col_a);
        mb += m.at(r, col_b);
    }
    ma /= static_cast<double>(n);
    mb /= static_cast<double>(n);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (int r = 0; r < n; ++r) {
        const double da = m.at(r, col_a) - ma;
        const double db = m.at(r, col_b) - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    const double den = std::sqrt(saa * sbb);
    if (den <= 0.0) return 0.0;
    return sab / den;
}

SelectionResult prune(const FeatureMatrix& m, const DivergenceRanking& ranking, double threshold) {
    SelectionResult out;
    std::vector<int> kept_cols;
    for (int c : ranking.order) {
        std::string drop_reason;
        for (int k : kept_cols) {
            const double r = std::fabs(pearson(m, c, k));
            if (r > threshold) {
                drop_reason = "correlated-with:" + m.feature_names[k];
                break;
            }
            if (r < 1e-12) {
                drop_reason = "zero-correlation";
                break;
            }
        }
        if (drop_reason.empty()) {
            kept_cols.push_back(c);
            out.kept.push_back(m.feature_names[c]);
        } else {
            out.dropped.push_back({m.feature_names[c], drop_reason});
        }
    }
    for (int c = 0; c < m.cols(); ++c)
        if (ranking.degenerate[c]) out.dropped.push_back({m.feature_names[c], "degenerate"});
    return out;
}

void write_selection_csv(const std::string& path, const FeatureMatrix& m,
                         const DivergenceRanking& ranking, const SelectionResult& result) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open " + path + " for writing");
    std::map<std::string, std::string> reason_of;
    for (const auto& d : result.dropped) reason_of[d.name] = d.reason;
    out << "name,divergence,status,reason\n";
    char buf[64];
    auto write_row = [&](int c) {
        out << m.feature_names[c] << ',';
        if (ranking.degenerate[c]) {
            out << "nan";
        } else {
            std::snprintf(buf, sizeof(buf), "%.17g", ranking.divergence[c]);
            out << buf;
        }
        auto it = reason_of.find(m.feature_names[c]);
        if (it == reason_of.end())
            out << ",kept,\n";
        else
            out << ",dropped," << it->second << '\n';
    };
    for (int c : ranking.order) write_row(c);
    for (int c = 0; c < m.cols(); ++c)
        if (ranking.degenerate[c]) write_row(c);
    if (!out) throw DataError("write failed: " + path);
}

}  // namespace texclass
