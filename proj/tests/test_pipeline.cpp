#include <algorithm>
#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"
#include "test_util.hpp"
#include "texclass/errors.hpp"
#include "texclass/image_io.hpp"
#include "texclass/pipeline.hpp"

using namespace texclass;
namespace fs = std::filesystem;

namespace {

// Two easily separable textures: a smooth low-frequency wave and full-range
// per-pixel noise. After the gradient step their run-length statistics sit
// far apart, so even a tiny holdout benchmark classifies them.
GrayImage smooth_tile(int size, double phase) {
    GrayImage img(size, size);
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x)
            img.at(y, x) = 120.0 + 60.0 * std::sin((x + phase) * 0.26) * std::sin((y - phase) * 0.26);
    return img;
}

GrayImage noise_tile(int size, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    GrayImage img(size, size);
    for (auto& v : img.data) v = static_cast<double>(rng() % 256);
    return img;
}

// 2 classes x 4 groups x 2 tiles, written as PGMs next to a relative-path
// manifest. Returns the manifest path.
std::string write_dataset(const testutil::TempDir& dir) {
    std::string manifest = "path,label,group\n";
    for (int g = 0; g < 4; ++g) {
        for (int i = 0; i < 2; ++i) {
            char name[32];
            std::snprintf(name, sizeof(name), "a_%d_%d.pgm", g, i);
            write_pgm(dir.file(name), smooth_tile(48, 3.0 * g + 1.3 * i));
            manifest += std::string(name) + ",smooth,ga" + std::to_string(g) + "\n";
            std::snprintf(name, sizeof(name), "b_%d_%d.pgm", g, i);
            write_pgm(dir.file(name), noise_tile(48, 100 + 10 * g + i));
            manifest += std::string(name) + ",noise,gb" + std::to_string(g) + "\n";
        }
    }
    const std::string path = dir.file("manifest.csv");
    testutil::write_file(path, manifest);
    return path;
}

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("default config validates and every key is applicable") {
    PipelineConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    CHECK(cfg.channel == "RGB.B");
    CHECK(cfg.seed == 42);
    CHECK(cfg.measures.size() == 4);

    apply_config_entry(cfg, "channel", " HSV.S ");
    apply_config_entry(cfg, "samples", "marks.csv");
    apply_config_entry(cfg, "se_size", "7");
    apply_config_entry(cfg, "levels", "16");
    apply_config_entry(cfg, "glcm_delta", "2");
    apply_config_entry(cfg, "fd_window", "9");
    apply_config_entry(cfg, "fd_max_scale", "4");
    apply_config_entry(cfg, "select", "no");
    apply_config_entry(cfg, "selection_threshold", "0.5");
    apply_config_entry(cfg, "covariance", "diagonal");
    apply_config_entry(cfg, "seed", "123");
    apply_config_entry(cfg, "train_fraction", "0.6");
    apply_config_entry(cfg, "measures", "FD,CM");
    CHECK(cfg.channel == "HSV.S");
    CHECK(cfg.samples == "marks.csv");
    CHECK(cfg.se_size == 7);
    CHECK(cfg.levels == 16);
    CHECK(cfg.glcm_delta == 2);
    CHECK(cfg.fd_window == 9);
    CHECK(cfg.fd_max_scale == 4);
    CHECK_FALSE(cfg.select);
    CHECK(cfg.selection_threshold == 0.5);
    CHECK(cfg.covariance == "diagonal");
    CHECK(cfg.seed == 123);
    CHECK(cfg.train_fraction == 0.6);
    REQUIRE(cfg.measures.size() == 2);
    CHECK(cfg.measures[0] == Measure::CM);  // canonical order, not listing order
    CHECK(cfg.measures[1] == Measure::FD);
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("config entries reject unknown keys and unparsable values") {
    PipelineConfig cfg;
    CHECK_THROWS_WITH_AS(apply_config_entry(cfg, "boost", "1"),
                         doctest::Contains("unknown config key"), DataError);
    CHECK_THROWS_WITH_AS(apply_config_entry(cfg, "se_size", "seven"),
                         doctest::Contains("bad integer"), DataError);
    CHECK_THROWS_WITH_AS(apply_config_entry(cfg, "select", "maybe"),
                         doctest::Contains("bad boolean"), DataError);
    CHECK_THROWS_WITH_AS(apply_config_entry(cfg, "seed", "-1"),
                         doctest::Contains("bad unsigned integer"), DataError);
    CHECK_THROWS_WITH_AS(apply_config_entry(cfg, "train_fraction", "0.5x"),
                         doctest::Contains("bad number"), DataError);
    CHECK_THROWS_AS(apply_config_entry(cfg, "measures", " , "), DataError);
}

TEST_CASE("validate rejects each out-of-range setting") {
    auto broken = [](const std::string& key, const std::string& value) {
        PipelineConfig cfg;
        apply_config_entry(cfg, key, value);
        return cfg;
    };
    CHECK_THROWS_AS(broken("channel", "RGB.Q").validate(), DataError);
    CHECK_THROWS_WITH_AS(broken("channel", "auto").validate(),
                         doctest::Contains("channel=auto needs a samples file"), DataError);
    {
        PipelineConfig cfg;
        cfg.channel = "auto";
        cfg.samples = "marks.csv";
        CHECK_NOTHROW(cfg.validate());  // auto is fine once samples are given
    }
    CHECK_THROWS_WITH_AS(broken("se_size", "4").validate(),
                         doctest::Contains("odd integer >= 3"), DataError);
    CHECK_THROWS_AS(broken("se_size", "1").validate(), DataError);
    CHECK_THROWS_AS(broken("levels", "1").validate(), DataError);
    CHECK_THROWS_AS(broken("levels", "257").validate(), DataError);
    CHECK_THROWS_AS(broken("glcm_delta", "0").validate(), DataError);
    CHECK_THROWS_AS(broken("fd_window", "3").validate(), DataError);
    CHECK_THROWS_AS(broken("fd_window", "10").validate(), DataError);
    CHECK_THROWS_AS(broken("fd_max_scale", "1").validate(), DataError);
    CHECK_THROWS_WITH_AS(broken("fd_max_scale", "13").validate(),
                         doctest::Contains("fd_window-1"), DataError);
    CHECK_THROWS_AS(broken("selection_threshold", "0").validate(), DataError);
    CHECK_THROWS_AS(broken("selection_threshold", "1.1").validate(), DataError);
    CHECK_THROWS_AS(broken("covariance", "sparse").validate(), DataError);
    CHECK_THROWS_AS(broken("train_fraction", "1").validate(), DataError);
    CHECK_THROWS_AS(broken("train_fraction", "0").validate(), DataError);
    {
        PipelineConfig cfg;
        cfg.measures.clear();
        CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("must not be empty"), DataError);
        cfg.measures = {Measure::RLM, Measure::RLM};
        CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("duplicate measure"), DataError);
    }
}

TEST_CASE("measure lists canonicalize order, separators and duplicates") {
    const std::vector<Measure> a = parse_measure_list("RLM,GMRF");
    REQUIRE(a.size() == 2);
    CHECK(a[0] == Measure::RLM);
    CHECK(a[1] == Measure::GMRF);
    CHECK(parse_measure_list("GMRF&RLM") == a);
    CHECK(parse_measure_list("GMRF+RLM") == a);
    CHECK(parse_measure_list("RLM,RLM").size() == 1);  // duplicates collapse

    const std::vector<Measure> b = parse_measure_list("FD,CM");
    CHECK(b[0] == Measure::CM);
    CHECK(measure_list_name(b) == "CM&FD");
    CHECK(measure_list_name(parse_measure_list(measure_list_name(b))) == "CM&FD");

    CHECK_THROWS_AS(parse_measure_list(""), DataError);
    CHECK_THROWS_AS(parse_measure_list("XYZ"), std::invalid_argument);
}

TEST_CASE("config files load with comments, blanks and line-tagged errors") {
    testutil::TempDir dir;
    const std::string path = dir.file("run.cfg");
    testutil::write_file(path,
                         "# benchmark settings\n"
                         "se_size = 7\n"
                         "\n"
                         "levels=16   # quantization\n"
                         "measures = GMRF , RLM\n"
                         "levels = 24\n");
    const PipelineConfig cfg = load_config(path);
    CHECK(cfg.se_size == 7);
    CHECK(cfg.levels == 24);  // later lines override earlier ones
    REQUIRE(cfg.measures.size() == 2);
    CHECK(cfg.measures[0] == Measure::RLM);

    testutil::write_file(path, "se_size\n");
    CHECK_THROWS_WITH_AS(load_config(path), doctest::Contains(":1: expected key=value"), DataError);
    testutil::write_file(path, "\nlevels=abc\n");
    CHECK_THROWS_WITH_AS(load_config(path), doctest::Contains(":2: levels"), DataError);
    CHECK_THROWS_WITH_AS(load_config(dir.file("absent.cfg")),
                         doctest::Contains("cannot open config file"), DataError);
}

TEST_CASE("resolved config text is deterministic and the hash tracks every key") {
    PipelineConfig cfg;
    const std::string text = resolved_config_text(cfg);
    CHECK(text == resolved_config_text(cfg));
    CHECK(text.find("channel = RGB.B\n") != std::string::npos);
    CHECK(text.find("seed = 42\n") != std::string::npos);
    CHECK(text.find("measures = CM,RLM,GMRF,FD\n") != std::string::npos);

    const std::uint64_t base = config_hash(cfg);
    CHECK(config_hash(cfg) == base);
    PipelineConfig seeded = cfg;
    seeded.seed = 43;
    PipelineConfig unselected = cfg;
    unselected.select = false;
    PipelineConfig fewer = cfg;
    fewer.measures = {Measure::FD};
    CHECK(config_hash(seeded) != base);
    CHECK(config_hash(unselected) != base);
    CHECK(config_hash(fewer) != base);
}

TEST_CASE("manifests resolve relative paths and validate their structure") {
    testutil::TempDir dir;
    write_pgm(dir.file("img0.pgm"), smooth_tile(16, 0.0));
    write_pgm(dir.file("img1.pgm"), noise_tile(16, 5));
    const std::string path = dir.file("mf.csv");

    testutil::write_file(path,
                         "path,label,group\n"
                         " img0.pgm , tumor , p1 \n"
                         "img1.pgm,stroma,p2\n");
    const DatasetManifest mf = read_manifest(path);
    REQUIRE(mf.rows.size() == 2);
    CHECK(mf.rows[0].path == "img0.pgm");
    CHECK(mf.rows[0].resolved == dir.file("img0.pgm"));  // relative to the manifest
    CHECK(mf.rows[0].label == "tumor");
    CHECK(mf.rows[0].group == "p1");
    CHECK(mf.rows[1].label == "stroma");

    CHECK_THROWS_WITH_AS(read_manifest(dir.file("none.csv")),
                         doctest::Contains("cannot open manifest"), DataError);
    testutil::write_file(path, "path,label,group\n\n");
    CHECK_THROWS_WITH_AS(read_manifest(path), doctest::Contains("lists no images"), DataError);
    testutil::write_file(path, "img0.pgm,tumor\n");
    CHECK_THROWS_WITH_AS(read_manifest(path), doctest::Contains(":1: expected path,label,group"),
                         DataError);
    testutil::write_file(path, "img0.pgm,,p1\n");
    CHECK_THROWS_WITH_AS(read_manifest(path), doctest::Contains("empty field"), DataError);
    testutil::write_file(path, "ghost.pgm,tumor,p1\n");
    CHECK_THROWS_WITH_AS(read_manifest(path), doctest::Contains("no such image"), DataError);
}

TEST_CASE("sample files load marked regions and reject malformed rows") {
    testutil::TempDir dir;
    GrayImage img(24, 24);
    for (auto& v : img.data) v = 200.0;
    BinaryMask mask(24, 24, 0);
    for (int y = 8; y < 16; ++y)
        for (int x = 8; x < 16; ++x) {
            img.at(y, x) = 40.0;
            mask.at(y, x) = 1;
        }
    write_pgm(dir.file("tile.pgm"), img);
    write_mask(dir.file("tile_mask.pgm"), mask);

    const std::string path = dir.file("samples.csv");
    testutil::write_file(path,
                         "path,x,y,w,h,mask\n"
                         "tile.pgm,4,4,16,16,tile_mask.pgm\n");
    const std::vector<ChannelSample> samples = read_samples(path);
    REQUIRE(samples.size() == 1);
    CHECK(samples[0].image.width == 24);
    CHECK(samples[0].rect.x == 4);
    CHECK(samples[0].rect.w == 16);
    CHECK(samples[0].reference.at(9, 9) == 1);

    CHECK_THROWS_WITH_AS(read_samples(dir.file("none.csv")),
                         doctest::Contains("cannot open samples file"), DataError);
    testutil::write_file(path, "tile.pgm,4,4,16,16\n");
    CHECK_THROWS_WITH_AS(read_samples(path), doctest::Contains("expected path,x,y,w,h,mask"),
                         DataError);
    testutil::write_file(path, "path,x,y,w,h,mask\n");
    CHECK_THROWS_WITH_AS(read_samples(path), doctest::Contains("lists no rows"), DataError);

    BinaryMask small(12, 12, 1);
    write_mask(dir.file("small_mask.pgm"), small);
    testutil::write_file(path, "tile.pgm,4,4,16,16,small_mask.pgm\n");
    CHECK_THROWS_WITH_AS(read_samples(path), doctest::Contains("mask size does not match"),
                         DataError);
}

TEST_CASE("channel resolution honors explicit names and ranks under auto") {
    PipelineConfig cfg;
    cfg.channel = "LAB.L";
    const ChannelChoice named = resolve_channel(cfg);
    CHECK_FALSE(named.autoranked);
    CHECK(channel_name(named.channel) == "LAB.L");

    testutil::TempDir dir;
    GrayImage img(24, 24);
    for (auto& v : img.data) v = 210.0;
    BinaryMask mask(24, 24, 0);
    for (int y = 8; y < 16; ++y)
        for (int x = 8; x < 16; ++x) {
            img.at(y, x) = 30.0 + ((x + y) % 3);  // dark, slightly textured nuclei stand-in
            mask.at(y, x) = 1;
        }
    for (int y = 0; y < 24; ++y)
        for (int x = 0; x < 24; ++x)
            if (!mask.at(y, x)) img.at(y, x) = 205.0 + ((x * 3 + y) % 5);
    write_pgm(dir.file("tile.pgm"), img);
    write_mask(dir.file("mask.pgm"), mask);
    testutil::write_file(dir.file("samples.csv"), "tile.pgm,2,2,20,20,mask.pgm\n");

    cfg.channel = "auto";
    cfg.samples = dir.file("samples.csv");
    const ChannelChoice ranked = resolve_channel(cfg);
    CHECK(ranked.autoranked);
    REQUIRE_FALSE(ranked.ranking.ranked.empty());
    CHECK(channel_name(ranked.channel) == channel_name(ranked.ranking.ranked.front().channel));

    // A reference mask that marks nothing leaves no pixels to score, which
    // excludes every channel and degenerates the auto ranking.
    write_mask(dir.file("none_mask.pgm"), BinaryMask(24, 24, 0));
    testutil::write_file(dir.file("unmarked.csv"), "tile.pgm,2,2,20,20,none_mask.pgm\n");
    cfg.samples = dir.file("unmarked.csv");
    CHECK_THROWS_WITH_AS(resolve_channel(cfg),
                         doctest::Contains("every channel was excluded as degenerate"),
                         DegeneracyError);
}

TEST_CASE("dataset extraction follows manifest order and collects failures") {
    testutil::TempDir dir;
    const std::string manifest = write_dataset(dir);
    PipelineConfig cfg;

    const ExtractOutcome ok = extract_dataset(read_manifest(manifest), cfg);
    CHECK(ok.failures.empty());
    REQUIRE(ok.features.rows() == 16);
    CHECK(ok.features.cols() == 88);  // 76 statistical + 12 model features
    CHECK(ok.features.feature_names[0] == "CM.CON.0");
    CHECK(ok.features.row_ids[0] == "a_0_0.pgm");
    CHECK(ok.features.row_ids[1] == "b_0_0.pgm");
    CHECK(ok.features.labels[0] == "smooth");
    CHECK(ok.features.groups[1] == "gb0");

    // A corrupt image fails its row only; the rest of the table survives.
    testutil::write_file(dir.file("broken.pgm"), "not an image at all");
    testutil::write_file(dir.file("mixed.csv"),
                         "a_0_0.pgm,smooth,ga0\nbroken.pgm,noise,gb9\nb_0_0.pgm,noise,gb0\n");
    const ExtractOutcome mixed = extract_dataset(read_manifest(dir.file("mixed.csv")), cfg);
    CHECK(mixed.features.rows() == 2);
    REQUIRE(mixed.failures.size() == 1);
    CHECK(mixed.failures[0].find("broken.pgm") != std::string::npos);

    testutil::write_file(dir.file("allbad.csv"), "broken.pgm,noise,gb9\n");
    CHECK_THROWS_WITH_AS(extract_dataset(read_manifest(dir.file("allbad.csv")), cfg),
                         doctest::Contains("extraction failed for every image; first error:"),
                         DataError);
    CHECK_THROWS_WITH_AS(extract_dataset(DatasetManifest{}, cfg), doctest::Contains("empty manifest"),
                         DataError);
}

TEST_CASE("run reports reproduce byte-identically for a fixed config") {
    testutil::TempDir dir;
    const std::string manifest = write_dataset(dir);
    PipelineConfig cfg;
    cfg.measures = {Measure::RLM};
    cfg.select = false;

    const DatasetManifest mf = read_manifest(manifest);
    const RunResult r1 = run_pipeline(mf, cfg);
    const RunResult r2 = run_pipeline(mf, cfg);
    CHECK(r1.plan.train_groups == r2.plan.train_groups);
    CHECK(r1.outcome.confusion.counts == r2.outcome.confusion.counts);
    CHECK(r1.outcome.confusion.overall_accuracy() >= 0.75);  // trivially separable textures

    write_run_report(dir.file("out1"), r1, cfg);
    write_run_report(dir.file("out2"), r2, cfg);
    for (const char* name : {"report.txt", "features.csv", "confusion.csv", "model.txt"})
        CHECK(testutil::read_file(dir.file("out1/") + name) ==
              testutil::read_file(dir.file("out2/") + name));
    CHECK_FALSE(fs::exists(dir.file("out1/selection.csv")));  // only written when selecting

    const std::string report = testutil::read_file(dir.file("out1/report.txt"));
    CHECK(report.find("texclass run report") != std::string::npos);
    CHECK(report.find("config_hash ") != std::string::npos);
    CHECK(report.find("[results]") != std::string::npos);
    CHECK(report.find("overall_accuracy = ") != std::string::npos);
    CHECK(report.find("disabled (all 44 features used)") != std::string::npos);

    // The seed is part of the resolved config, so a different seed can never
    // reproduce the same report bytes.
    PipelineConfig seeded = cfg;
    seeded.seed = 7;
    write_run_report(dir.file("out3"), run_pipeline(mf, seeded), seeded);
    CHECK(testutil::read_file(dir.file("out3/report.txt")) != report);
    CHECK(testutil::read_file(dir.file("out3/features.csv")) ==
          testutil::read_file(dir.file("out1/features.csv")));  // features ignore the seed
}

TEST_CASE("cli rejects bad invocations and reports its version") {
    testutil::TempDir dir;
    CHECK(testutil::run_cli("", dir).exit_code == 1);
    CHECK(testutil::run_cli("frobnicate", dir).exit_code == 1);
    CHECK(testutil::run_cli("run --manifest " + dir.file("none.csv") + " --out " + dir.file("o"),
                            dir).exit_code == 1);  // ExistingFile check fails at parse time
    CHECK(testutil::run_cli("extract --manifest", dir).exit_code == 1);
    const testutil::CliResult v = testutil::run_cli("--version", dir);
    CHECK(v.exit_code == 0);
    CHECK(v.out.find("texclass") != std::string::npos);
}

TEST_CASE("cli extract, select, train and predict round-trip a dataset") {
    testutil::TempDir dir;
    const std::string manifest = write_dataset(dir);
    const std::string fcsv = dir.file("features.csv");

    const testutil::CliResult ex = testutil::run_cli(
        "extract --manifest " + manifest + " --out " + fcsv + " --measures RLM", dir);
    CHECK(ex.exit_code == 0);
    CHECK(ex.out.find("44 features -> ") != std::string::npos);
    const FeatureMatrix m = read_feature_csv(fcsv);
    CHECK(m.rows() == 16);
    CHECK(m.cols() == 44);

    const testutil::CliResult sel = testutil::run_cli(
        "select --features " + fcsv + " --threshold 0.8 --out " + dir.file("sel.csv"), dir);
    CHECK(sel.exit_code == 0);
    CHECK(sel.out.find("kept ") != std::string::npos);
    CHECK(testutil::read_file(dir.file("sel.csv")).rfind("name,divergence,status,reason\n", 0) == 0);

    const testutil::CliResult tr = testutil::run_cli(
        "train --features " + fcsv + " --model " + dir.file("model.txt"), dir);
    CHECK(tr.exit_code == 0);
    CHECK(tr.out.find("2 classes -> ") != std::string::npos);

    const testutil::CliResult pr = testutil::run_cli(
        "predict --model " + dir.file("model.txt") + " --features " + fcsv + " --out " +
            dir.file("pred.csv"), dir);
    CHECK(pr.exit_code == 0);
    CHECK(pr.out.find("(16/16 labeled rows)") != std::string::npos);
    const std::string pred = testutil::read_file(dir.file("pred.csv"));
    CHECK(pred.rfind("id,label,predicted\n", 0) == 0);
    CHECK(std::count(pred.begin(), pred.end(), '\n') == 17);

    // A manifest row pointing at garbage degrades the run to exit code 2.
    testutil::write_file(dir.file("broken.pgm"), "junk");
    testutil::write_file(dir.file("mixed.csv"),
                         "a_0_0.pgm,smooth,ga0\nb_0_0.pgm,noise,gb0\nbroken.pgm,noise,gb1\n");
    const testutil::CliResult bad = testutil::run_cli(
        "extract --manifest " + dir.file("mixed.csv") + " --out " + dir.file("f2.csv"), dir);
    CHECK(bad.exit_code == 2);
    CHECK(bad.err.find("failed: broken.pgm") != std::string::npos);
}

TEST_CASE("cli run maps degenerate selection to exit code 3") {
    testutil::TempDir dir;
    GrayImage flat(32, 32);
    for (auto& v : flat.data) v = 128.0;
    std::string manifest;
    for (int g = 0; g < 2; ++g)
        for (int i = 0; i < 2; ++i) {
            char name[32];
            std::snprintf(name, sizeof(name), "fa%d%d.pgm", g, i);
            write_pgm(dir.file(name), flat);
            manifest += std::string(name) + ",a,pa" + std::to_string(g) + "\n";
            std::snprintf(name, sizeof(name), "fb%d%d.pgm", g, i);
            write_pgm(dir.file(name), flat);
            manifest += std::string(name) + ",b,pb" + std::to_string(g) + "\n";
        }
    testutil::write_file(dir.file("flat.csv"), manifest);
    const testutil::CliResult r = testutil::run_cli(
        "run --manifest " + dir.file("flat.csv") + " --out " + dir.file("out") + " --measures RLM",
        dir);
    CHECK(r.exit_code == 3);  // every feature constant -> selection keeps nothing
    CHECK(r.err.find("selection kept no features") != std::string::npos);
}

TEST_CASE("cli run and synth rewrite identical artifacts when repeated") {
    testutil::TempDir dir;
    const std::string manifest = write_dataset(dir);
    const std::string base =
        "run --manifest " + manifest + " --measures RLM --seed 5 --set select=true --out ";
    const testutil::CliResult r1 = testutil::run_cli(base + dir.file("r1"), dir);
    REQUIRE(r1.exit_code == 0);
    CHECK(r1.out.find("overall accuracy") != std::string::npos);
    const testutil::CliResult r2 = testutil::run_cli(base + dir.file("r2"), dir);
    REQUIRE(r2.exit_code == 0);
    for (const char* name : {"report.txt", "features.csv", "selection.csv", "model.txt",
                             "confusion.csv"})
        CHECK(testutil::read_file(dir.file("r1/") + name) ==
              testutil::read_file(dir.file("r2/") + name));

    const std::string synth =
        "synth --seed 9 --n0 2 --length 2 --size 96 --measures RLM,FD --se-size 3 --out ";
    REQUIRE(testutil::run_cli(synth + dir.file("s1"), dir).exit_code == 0);
    REQUIRE(testutil::run_cli(synth + dir.file("s2"), dir).exit_code == 0);
    for (const char* name : {"report.txt", "scene_01.pgm", "scene_02.pgm", "susceptibility.csv"})
        CHECK(testutil::read_file(dir.file("s1/") + name) ==
              testutil::read_file(dir.file("s2/") + name));
    CHECK(testutil::read_file(dir.file("s1/susceptibility.svg")).find("<svg") != std::string::npos);

    const testutil::CliResult cracked = testutil::run_cli(
        "synth --seed 9 --n0 2 --length 2 --size 96 --measures RLM --se-size 3 --with-craquelure"
        " --cracks 3 --out " + dir.file("s3"), dir);
    REQUIRE(cracked.exit_code == 0);
    for (const char* name : {"crack_01.pgm", "crack_02.pgm", "susceptibility_craquelure.csv",
                             "susceptibility_craquelure.svg"})
        CHECK(fs::exists(dir.file("s3/") + name));
    CHECK(testutil::read_file(dir.file("s3/report.txt")).find("[susceptibility_craquelure]") !=
          std::string::npos);
}

TEST_CASE("cli channels command ranks marked samples") {
    testutil::TempDir dir;
    GrayImage img(24, 24);
    BinaryMask mask(24, 24, 0);
    for (int y = 0; y < 24; ++y)
        for (int x = 0; x < 24; ++x) {
            const bool fg = y >= 8 && y < 16 && x >= 8 && x < 16;
            img.at(y, x) = fg ? 30.0 + ((x + y) % 3) : 205.0 + ((x * 3 + y) % 5);
            mask.at(y, x) = fg ? 1 : 0;
        }
    write_pgm(dir.file("tile.pgm"), img);
    write_mask(dir.file("mask.pgm"), mask);
    testutil::write_file(dir.file("samples.csv"), "tile.pgm,2,2,20,20,mask.pgm\n");

    const testutil::CliResult r = testutil::run_cli(
        "channels --samples " + dir.file("samples.csv") + " --out " + dir.file("rank.csv"), dir);
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("selected channel: ") != std::string::npos);
    const std::string csv = testutil::read_file(dir.file("rank.csv"));
    CHECK(csv.rfind("channel,p_error,status,note\n", 0) == 0);
    CHECK(csv.find("RGB.B,") != std::string::npos);
}

}  // TEST_SUITE("pipeline")
