#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "texclass/classifier.hpp"
#include "texclass/features.hpp"
#include "texclass/segmentation.hpp"
#include "texclass/synthetic.hpp"

namespace texclass {

/// Everything the commands need, loadable from a key=value file and
/// overridable one key at a time from the command line.
struct PipelineConfig {
    std::string channel = "RGB.B";  // channel name, or "auto" to rank via samples
    std::string samples;            // sample CSV (path,x,y,w,h,mask); required for auto
    int se_size = 5;                // morphological gradient structuring element
    int levels = 32;                // quantization for CM and RLM
    int glcm_delta = 1;
    int fd_window = 13;
    int fd_max_scale = 8;
    bool select = true;
    double selection_threshold = 0.8;
    std::string covariance = "full";  // or "diagonal"
    std::uint64_t seed = 42;          // holdout split seed
    double train_fraction = 0.8;
    std::vector<Measure> measures = {Measure::CM, Measure::RLM, Measure::GMRF, Measure::FD};

    void validate() const;
    ExtractorConfig extractor() const;
    EvalSettings eval_settings() const;
};

/// Applies one key=value pair; throws DataError on unknown keys or bad values.
void apply_config_entry(PipelineConfig& cfg, const std::string& key, const std::string& value);

/// key=value lines, '#' comments; later lines override earlier ones.
PipelineConfig load_config(const std::string& path);

/// Canonical listing of every resolved setting, one per line.
std::string resolved_config_text(const PipelineConfig& cfg);

/// FNV-1a of the resolved text; embedded in reports for reproducibility.
std::uint64_t config_hash(const PipelineConfig& cfg);

std::vector<Measure> parse_measure_list(const std::string& csv);
std::string measure_list_name(const std::vector<Measure>& measures);

struct ManifestRow {
    std::string path;      // as written in the manifest
    std::string resolved;  // relative paths resolved against the manifest directory
    std::string label;
    std::string group;
};

struct DatasetManifest {
    std::vector<ManifestRow> rows;
};

/// CSV of path,label,group (optional header line "path,label,group").
DatasetManifest read_manifest(const std::string& path);

/// CSV of path,x,y,w,h,mask describing operator-marked nucleus samples.
std::vector<ChannelSample> read_samples(const std::string& path);

struct ChannelChoice {
    ChannelRef channel;
    bool autoranked = false;
    ChannelRanking ranking;  // populated when autoranked
};

/// Parses cfg.channel, or ranks the sample set when it says "auto".
ChannelChoice resolve_channel(const PipelineConfig& cfg);

struct ExtractOutcome {
    FeatureMatrix features;        // successful rows, manifest order
    std::vector<std::string> failures;  // "path: reason", manifest order
    ChannelChoice channel;
};

/// Per image: load, channel extraction, morphological gradient, measure
/// extraction. Failures are collected, not fatal.
ExtractOutcome extract_dataset(const DatasetManifest& manifest, const PipelineConfig& cfg);

struct RunResult {
    ExtractOutcome extraction;
    HoldoutPlan plan;
    HoldoutOutcome outcome;
};

/// extract -> group holdout split -> select -> train -> score.
RunResult run_pipeline(const DatasetManifest& manifest, const PipelineConfig& cfg);

/// Writes features.csv, selection.csv (when selection ran), confusion.csv,
/// model.txt and report.txt into dir. Deterministic bytes for a fixed
/// config+seed+dataset.
void write_run_report(const std::string& dir, const RunResult& result, const PipelineConfig& cfg);

struct SynthOptions {
    SceneSpec scene;
    bool with_craquelure = false;
    CraquelureSpec craquelure;
    std::vector<Measure> measures = {Measure::CM, Measure::RLM, Measure::GMRF, Measure::FD};
    int se_size = 5;
    ExtractorConfig extractor;
};

/// Writes scene_NN.pgm (and crack_NN.pgm when enabled), susceptibility CSV
/// and SVG per series, and report.txt into dir.
void run_synth(const std::string& dir, const SynthOptions& opt);

}  // namespace texclass
