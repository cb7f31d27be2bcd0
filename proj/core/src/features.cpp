#include "texclass/features.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "texclass/errors.hpp"
#include "texclass/glcm.hpp"
#include "texclass/gmrf.hpp"
#include "texclass/rlm.hpp"

namespace texclass {

const char* measure_name(Measure m) {
    switch (m) {
        case Measure::CM: return "CM";
        case Measure::RLM: return "RLM";
        case Measure::GMRF: return "GMRF";
        case Measure::FD: return "FD";
    }
    return "?";
}

Measure parse_measure(const std::string& name) {
    std::string u;
    for (char c : name) u.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    if (u == "CM" || u == "GLCM") return Measure::CM;
    if (u == "RLM") return Measure::RLM;
    if (u == "GMRF") return Measure::GMRF;
    if (u == "FD") return Measure::FD;
    throw std::invalid_argument("unknown texture measure '" + name + "' (want CM, RLM, GMRF or FD)");
}

Measure measure_of_feature(const std::string& feature_name) {
    const auto dot = feature_name.find('.');
    if (dot == std::string::npos)
        throw std::invalid_argument("feature name without measure prefix: " + feature_name);
    return parse_measure(feature_name.substr(0, dot));
}

void NamedFeatures::append(const NamedFeatures& other) {
    names.insert(names.end(), other.names.begin(), other.names.end());
    values.insert(values.end(), other.values.begin(), other.values.end());
}

namespace {

const char* angle_suffix(Angle a) {
    switch (a) {
        case Angle::Deg0: return "0";
        case Angle::Deg45: return "45";
        case Angle::Deg90: return "90";
        case Angle::Deg135: return "135";
    }
    return "?";
}

}  // namespace

NamedFeatures extract_statistical(const QuantizedImage& img, int glcm_delta) {
    NamedFeatures out;

    // Co-occurrence block, Table-II-style indexing: each statistic at the
    // four angles before the next statistic.
    HaralickFeatures hf[4];
    for (int a = 0; a < 4; ++a) hf[a] = haralick(glcm(img, glcm_delta, kAngles[a]));
    const std::pair<const char*, double HaralickFeatures::*> cm_fields[] = {
        {"CON", &HaralickFeatures::contrast},     {"COR", &HaralickFeatures::correlation},
        {"ENG", &HaralickFeatures::energy},       {"ENT", &HaralickFeatures::entropy},
        {"HOM", &HaralickFeatures::homogeneity},  {"DIS", &HaralickFeatures::dissimilarity},
        {"IDM", &HaralickFeatures::idm},          {"MP", &HaralickFeatures::max_probability},
    };
    for (const auto& [name, field] : cm_fields)
        for (int a = 0; a < 4; ++a)
            out.append(std::string("CM.") + name + "." + angle_suffix(kAngles[a]), hf[a].*field);

    RlmFeatures rf[4];
    const auto pixels = static_cast<std::int64_t>(img.pixel_count());
    for (int a = 0; a < 4; ++a) rf[a] = rlm_features(rlm(img, kAngles[a]), pixels);
    const std::pair<const char*, double RlmFeatures::*> rlm_fields[] = {
        {"SRE", &RlmFeatures::sre},       {"LRE", &RlmFeatures::lre},
        {"GLN", &RlmFeatures::gln},       {"RLN", &RlmFeatures::rln},
        {"RP", &RlmFeatures::rp},         {"LGLRE", &RlmFeatures::lglre},
        {"HGLRE", &RlmFeatures::hglre},   {"SRLGLE", &RlmFeatures::srlgle},
        {"SRHGLE", &RlmFeatures::srhgle}, {"LRLGLE", &RlmFeatures::lrlgle},
        {"LRHGLE", &RlmFeatures::lrhgle},
    };
    for (const auto& [name, field] : rlm_fields)
        for (int a = 0; a < 4; ++a)
            out.append(std::string("RLM.") + name + "." + angle_suffix(kAngles[a]), rf[a].*field);
    return out;
}

NamedFeatures extract_model(const GrayImage& img, const FdOptions& fd) {
    NamedFeatures out;
    const GmrfParams gp = gmrf_estimate(img);
    for (int l = 0; l < 6; ++l) out.append("GMRF.a" + std::to_string(l + 1), gp.alpha[l]);
    out.append("GMRF.sigma", gp.sigma);

    const FdStats fs = fd_stats(fbm_fd_image(img, fd));
    out.append("FD.mean", fs.mean);
    out.append("FD.var", fs.variance);
    out.append("FD.skew", fs.skewness);
    out.append("FD.kurt", fs.kurtosis);
    out.append("FD.lac", fs.lacunarity);
    return out;
}

NamedFeatures extract_measures(const GrayImage& img, const std::vector<Measure>& measures,
                               const ExtractorConfig& cfg) {
    if (measures.empty()) throw std::invalid_argument("extract_measures: empty measure set");
    const auto want = [&](Measure m) {
        return std::find(measures.begin(), measures.end(), m) != measures.end();
    };

    NamedFeatures stat;
    if (want(Measure::CM) || want(Measure::RLM))
        stat = extract_statistical(quantize(img, cfg.levels), cfg.glcm_delta);

    NamedFeatures model;
    GmrfParams gp;
    if (want(Measure::GMRF)) gp = gmrf_estimate(img);
    FdStats fs;
    if (want(Measure::FD)) fs = fd_stats(fbm_fd_image(img, cfg.fd));

    NamedFeatures out;
    for (Measure m : kAllMeasures) {
        if (!want(m)) continue;
        switch (m) {
            case Measure::CM:
                for (size_t i = 0; i < 32; ++i) out.append(stat.names[i], stat.values[i]);
                break;
            case Measure::RLM:
                for (size_t i = 32; i < stat.size(); ++i) out.append(stat.names[i], stat.values[i]);
                break;
            case Measure::GMRF:
                for (int l = 0; l < 6; ++l) out.append("GMRF.a" + std::to_string(l + 1), gp.alpha[l]);
                out.append("GMRF.sigma", gp.sigma);
                break;
            case Measure::FD:
                out.append("FD.mean", fs.mean);
                out.append("FD.var", fs.variance);
                out.append("FD.skew", fs.skewness);
                out.append("FD.kurt", fs.kurtosis);
                out.append("FD.lac", fs.lacunarity);
                break;
        }
    }
    return out;
}

std::vector<std::string> FeatureMatrix::class_labels() const {
    std::set<std::string> s(labels.begin(), labels.end());
    return {s.begin(), s.end()};
}

int FeatureMatrix::find_feature(const std::string& name) const {
    const auto it = std::find(feature_names.begin(), feature_names.end(), name);
    return it == feature_names.end() ? -1 : static_cast<int>(it - feature_names.begin());
}

FeatureMatrix FeatureMatrix::select_columns(const std::vector<std::string>& names) const {
    FeatureMatrix out;
    out.labels = labels;
    out.groups = groups;
    out.row_ids = row_ids;
    out.feature_names = names;
    std::vector<int> idx;
    for (const auto& n : names) {
        const int c = find_feature(n);
        if (c < 0) throw DataError("feature column not found: " + n);
        idx.push_back(c);
    }
    out.values.resize(static_cast<size_t>(rows()) * names.size());
    for (int r = 0; r < rows(); ++r)
        for (size_t c = 0; c < idx.size(); ++c)
            out.values[static_cast<size_t>(r) * names.size() + c] = at(r, idx[c]);
    return out;
}

FeatureMatrix FeatureMatrix::select_rows(const std::vector<int>& idx) const {
    FeatureMatrix out;
    out.feature_names = feature_names;
    for (int r : idx) {
        if (r < 0 || r >= rows()) throw std::out_of_range("select_rows: bad row index");
        out.labels.push_back(labels[r]);
        out.groups.push_back(groups[r]);
        if (!row_ids.empty()) out.row_ids.push_back(row_ids[r]);
        for (int c = 0; c < cols(); ++c) out.values.push_back(at(r, c));
    }
    return out;
}

void FeatureMatrix::validate() const {
    if (values.size() != static_cast<size_t>(rows()) * cols())
        throw DataError("feature matrix: value count does not match rows x cols");
    if (groups.size() != labels.size()) throw DataError("feature matrix: group/label count mismatch");
    if (!row_ids.empty() && row_ids.size() != labels.size())
        throw DataError("feature matrix: row id count mismatch");
    std::set<std::string> names(feature_names.begin(), feature_names.end());
    if (names.size() != feature_names.size()) throw DataError("feature matrix: duplicate feature names");
    for (double v : values)
        if (!std::isfinite(v)) throw DataError("feature matrix: non-finite value");
}

FeatureMatrix fuse(const std::vector<FeatureMatrix>& parts) {
    if (parts.empty()) throw std::invalid_argument("fuse: no parts");
    FeatureMatrix out;
    out.labels = parts[0].labels;
    out.groups = parts[0].groups;
    out.row_ids = parts[0].row_ids;
    for (const auto& p : parts) {
        if (p.labels != out.labels) throw DataError("fuse: row labels differ between parts");
        if (p.groups != out.groups) throw DataError("fuse: row groups differ between parts");
        if (p.rows() != out.rows()) throw DataError("fuse: row counts differ between parts");
        out.feature_names.insert(out.feature_names.end(), p.feature_names.begin(), p.feature_names.end());
    }
    out.values.resize(static_cast<size_t>(out.rows()) * out.cols());
    size_t col0 = 0;
    for (const auto& p : parts) {
        for (int r = 0; r < p.rows(); ++r)
            for (int c = 0; c < p.cols(); ++c)
                out.values[static_cast<size_t>(r) * out.cols() + col0 + c] = p.at(r, c);
        col0 += p.cols();
    }
    out.validate();
    return out;
}

namespace {

std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

void write_feature_csv(const std::string& path, const FeatureMatrix& m) {
    std::ofstream out(path);
    if (!out) throw DataError(path + ": cannot open for writing");
    out << "id,label,group";
    for (const auto& n : m.feature_names) out << "," << n;
    out << "\n";
    for (int r = 0; r < m.rows(); ++r) {
        out << (m.row_ids.empty() ? std::to_string(r) : m.row_ids[r]) << "," << m.labels[r] << ","
            << m.groups[r];
        for (int c = 0; c < m.cols(); ++c) out << "," << format_value(m.at(r, c));
        out << "\n";
    }
    if (!out) throw DataError(path + ": write failed");
}

FeatureMatrix read_feature_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError(path + ": cannot open");
    std::string line;
    if (!std::getline(in, line)) throw DataError(path + ": empty feature CSV");
    auto header = split_csv_line(line);
    if (header.size() < 4 || header[0] != "id" || header[1] != "label" || header[2] != "group")
        throw DataError(path + ": expected header 'id,label,group,<features...>'");

    FeatureMatrix m;
    m.feature_names.assign(header.begin() + 3, header.end());
    size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto cells = split_csv_line(line);
        if (cells.size() != header.size())
            throw DataError(path + ":" + std::to_string(line_no) + ": wrong column count");
        m.row_ids.push_back(cells[0]);
        m.labels.push_back(cells[1]);
        m.groups.push_back(cells[2]);
        for (size_t c = 3; c < cells.size(); ++c) {
            try {
                size_t used = 0;
                const double v = std::stod(cells[c], &used);
                if (used != cells[c].size()) throw std::invalid_argument("trailing junk");
                m.values.push_back(v);
            } catch (const std::exception&) {
                throw DataError(path + ":" + std::to_string(line_no) + ": bad number '" + cells[c] + "'");
            }
        }
    }
    if (m.rows() == 0) throw DataError(path + ": feature CSV has no data rows");
    m.validate();
    return m;
}

}  // namespace texclass
