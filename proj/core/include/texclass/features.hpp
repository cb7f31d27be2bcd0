#pragma once

#include <string>
#include <vector>

#include "texclass/fractal.hpp"
#include "texclass/image.hpp"

namespace texclass {

/// The four texture measures. Fusion and reports always keep this order.
enum class Measure { CM, RLM, GMRF, FD };

inline constexpr Measure kAllMeasures[4] = {Measure::CM, Measure::RLM, Measure::GMRF, Measure::FD};

const char* measure_name(Measure m);
Measure parse_measure(const std::string& name);

/// Measure owning a feature, inferred from the name prefix ("CM.", ...).
Measure measure_of_feature(const std::string& feature_name);

/// Parallel name/value lists; names are the stable public contract used in
/// CSV headers and selection reports.
struct NamedFeatures {
    std::vector<std::string> names;
    std::vector<double> values;

    void append(std::string name, double value) {
        names.push_back(std::move(name));
        values.push_back(value);
    }
    void append(const NamedFeatures& other);
    size_t size() const { return values.size(); }
};

/// Knobs shared by the extractors; defaults follow the pipeline defaults.
struct ExtractorConfig {
    int levels = 32;      // gray levels for CM and RLM
    int glcm_delta = 1;   // co-occurrence displacement
    FdOptions fd = {};    // FD window and scale range
};

/// 8 co-occurrence statistics and 11 run-length statistics at the four
/// angles: 76 features named "CM.CON.0" ... "RLM.LRHGLE.135", angle-minor.
NamedFeatures extract_statistical(const QuantizedImage& img, int glcm_delta = 1);

/// 7 GMRF parameters plus 5 FD-image statistics: 12 features named
/// "GMRF.a1".."GMRF.sigma", "FD.mean".."FD.lac".
NamedFeatures extract_model(const GrayImage& img, const FdOptions& fd = {});

/// Runs the requested measures on one preprocessed gray image (statistical
/// measures quantize it first) and concatenates in canonical order.
NamedFeatures extract_measures(const GrayImage& img, const std::vector<Measure>& measures,
                               const ExtractorConfig& cfg);

/// Samples-by-features table with per-row class label and patient group.
struct FeatureMatrix {
    std::vector<std::string> feature_names;
    std::vector<double> values;  // rows x cols, row-major
    std::vector<std::string> labels;
    std::vector<std::string> groups;
    std::vector<std::string> row_ids;  // source path or synthetic id; may be empty

    int rows() const { return static_cast<int>(labels.size()); }
    int cols() const { return static_cast<int>(feature_names.size()); }
    double at(int r, int c) const { return values[static_cast<size_t>(r) * cols() + c]; }
    double& at(int r, int c) { return values[static_cast<size_t>(r) * cols() + c]; }

    /// Sorted distinct labels.
    std::vector<std::string> class_labels() const;
    /// Column index by name; -1 if absent.
    int find_feature(const std::string& name) const;
    /// New matrix restricted to the named columns, in the given order.
    FeatureMatrix select_columns(const std::vector<std::string>& names) const;
    /// New matrix restricted to the given row indices.
    FeatureMatrix select_rows(const std::vector<int>& idx) const;

    void validate() const;  // throws on ragged data or duplicate names
};

/// Column concatenation of parts sharing identical row count, labels,
/// groups and row order. Throws DataError on any mismatch.
FeatureMatrix fuse(const std::vector<FeatureMatrix>& parts);

/// CSV persistence: header "id,label,group,<feature...>"; one row per sample.
void write_feature_csv(const std::string& path, const FeatureMatrix& m);
FeatureMatrix read_feature_csv(const std::string& path);

}  // namespace texclass
