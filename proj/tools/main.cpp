// texclass: texture-based tissue-image classification toolkit.
//
// Subcommands: channels, extract, select, train, predict, run, synth.
// Exit codes: 0 success, 1 usage, 2 data error, 3 numerical degeneracy.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "texclass/classifier.hpp"
#include "texclass/errors.hpp"
#include "texclass/pipeline.hpp"
#include "texclass/segmentation.hpp"
#include "texclass/selection.hpp"

namespace tc = texclass;

namespace {

// Config sources shared by extract/train/run: file, then generic --set
// overrides, then the dedicated convenience flags.
struct ConfigOpts {
    std::string file;
    std::vector<std::string> sets;
    std::string channel;
    std::string measures;
    std::string seed;
};

void add_config_flags(CLI::App* sub, ConfigOpts& o) {
    sub->add_option("--config", o.file, "key=value config file")->check(CLI::ExistingFile);
    sub->add_option("--set", o.sets, "override one config key (key=value, repeatable)");
    sub->add_option("--channel", o.channel, "color channel (e.g. RGB.B) or 'auto'");
    sub->add_option("--measures", o.measures, "measure subset, e.g. GMRF,RLM");
    sub->add_option("--seed", o.seed, "holdout split seed");
}

tc::PipelineConfig build_config(const ConfigOpts& o) {
    tc::PipelineConfig cfg = o.file.empty() ? tc::PipelineConfig{} : tc::load_config(o.file);
    for (const std::string& kv : o.sets) {
        const std::size_t eq = kv.find('=');
        if (eq == std::string::npos)
            throw tc::DataError("--set expects key=value, got '" + kv + "'");
        tc::apply_config_entry(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (!o.channel.empty()) tc::apply_config_entry(cfg, "channel", o.channel);
    if (!o.measures.empty()) tc::apply_config_entry(cfg, "measures", o.measures);
    if (!o.seed.empty()) tc::apply_config_entry(cfg, "seed", o.seed);
    cfg.validate();
    return cfg;
}

std::vector<tc::ColorSpace> parse_spaces(const std::string& csv) {
    std::vector<tc::ColorSpace> spaces;
    std::string tok;
    std::stringstream ss(csv);
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        const tc::ColorSpace s = tc::parse_color_space(tok);
        if (std::find(spaces.begin(), spaces.end(), s) == spaces.end()) spaces.push_back(s);
    }
    if (spaces.empty()) throw tc::DataError("no color spaces given");
    return spaces;
}

int cmd_channels(const std::string& samples_path, const std::string& spaces_csv, double factor,
                 const std::string& out_path) {
    const auto samples = tc::read_samples(samples_path);
    const tc::ChannelRanking ranking = tc::rank_channels(samples, parse_spaces(spaces_csv), factor);
    tc::write_ranking_csv(out_path, ranking);
    if (ranking.ranked.empty())
        throw tc::DegeneracyError("every channel was excluded; see " + out_path);
    std::printf("selected channel: %s (p_error %.6f)\n",
                tc::channel_name(ranking.ranked.front().channel).c_str(),
                ranking.ranked.front().p_error);
    for (const auto& s : ranking.ranked)
        std::printf("  %-8s p_error %.6f\n", tc::channel_name(s.channel).c_str(), s.p_error);
    for (const auto& s : ranking.excluded)
        std::fprintf(stderr, "excluded %s: %s\n", tc::channel_name(s.channel).c_str(),
                     s.note.c_str());
    std::printf("ranking written to %s\n", out_path.c_str());
    return 0;
}

int cmd_extract(const std::string& manifest_path, const ConfigOpts& copts,
                const std::string& out_path) {
    const tc::PipelineConfig cfg = build_config(copts);
    const tc::DatasetManifest mf = tc::read_manifest(manifest_path);
    const tc::ExtractOutcome outcome = tc::extract_dataset(mf, cfg);
    tc::write_feature_csv(out_path, outcome.features);
    for (const auto& f : outcome.failures) std::fprintf(stderr, "failed: %s\n", f.c_str());
    std::printf("channel %s, %d of %zu images, %d features -> %s\n",
                tc::channel_name(outcome.channel.channel).c_str(), outcome.features.rows(),
                mf.rows.size(), outcome.features.cols(), out_path.c_str());
    return outcome.failures.empty() ? 0 : 2;
}

int cmd_select(const std::string& features_path, double threshold, const std::string& out_path) {
    if (!(threshold > 0.0 && threshold <= 1.0))
        throw tc::DataError("--threshold must lie in (0, 1]");
    const tc::FeatureMatrix m = tc::read_feature_csv(features_path);
    const tc::DivergenceRanking ranking = tc::divergence(m);
    const tc::SelectionResult result = tc::prune(m, ranking, threshold);
    tc::write_selection_csv(out_path, m, ranking, result);
    std::printf("kept %zu of %d features -> %s\n", result.kept.size(), m.cols(), out_path.c_str());
    for (const auto& k : result.kept) std::printf("  %s\n", k.c_str());
    return 0;
}

int cmd_train(const std::string& features_path, const ConfigOpts& copts,
              const std::string& model_path, const std::string& selection_path) {
    const tc::PipelineConfig cfg = build_config(copts);
    const tc::FeatureMatrix m = tc::read_feature_csv(features_path);
    tc::FeatureMatrix used = m;
    if (cfg.select) {
        const tc::DivergenceRanking ranking = tc::divergence(m);
        const tc::SelectionResult result = tc::prune(m, ranking, cfg.selection_threshold);
        if (result.kept.empty()) throw tc::DegeneracyError("selection kept no features");
        if (!selection_path.empty()) tc::write_selection_csv(selection_path, m, ranking, result);
        used = m.select_columns(result.kept);
    }
    const tc::GaussianClassModel model = tc::train(used, cfg.covariance == "diagonal");
    for (const auto& w : model.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
    tc::save_model(model_path, model);
    std::printf("trained on %d rows, %d features, %zu classes -> %s\n", used.rows(), used.cols(),
                model.classes.size(), model_path.c_str());
    return 0;
}

int cmd_predict(const std::string& model_path, const std::string& features_path,
                const std::string& out_path) {
    const tc::GaussianClassModel model = tc::load_model(model_path);
    const tc::FeatureMatrix m = tc::read_feature_csv(features_path);
    std::vector<int> cols;
    cols.reserve(model.feature_names.size());
    for (const auto& name : model.feature_names) {
        const int c = m.find_feature(name);
        if (c < 0) throw tc::DataError("feature CSV lacks model feature '" + name + "'");
        cols.push_back(c);
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw tc::DataError("cannot open " + out_path + " for writing");
    out << "id,label,predicted\n";
    std::vector<double> x(cols.size());
    int correct = 0, labeled = 0;
    for (int r = 0; r < m.rows(); ++r) {
        for (std::size_t i = 0; i < cols.size(); ++i) x[i] = m.at(r, cols[i]);
        const tc::Prediction p = tc::predict(model, x);
        out << m.row_ids[r] << ',' << m.labels[r] << ',' << p.label << '\n';
        if (!m.labels[r].empty()) {
            ++labeled;
            if (m.labels[r] == p.label) ++correct;
        }
    }
    if (!out) throw tc::DataError("write failed: " + out_path);
    std::printf("%d rows -> %s\n", m.rows(), out_path.c_str());
    if (labeled > 0)
        std::printf("accuracy %.4f (%d/%d labeled rows)\n",
                    static_cast<double>(correct) / labeled, correct, labeled);
    return 0;
}

int cmd_run(const std::string& manifest_path, const ConfigOpts& copts, const std::string& out_dir) {
    const tc::PipelineConfig cfg = build_config(copts);
    const tc::DatasetManifest mf = tc::read_manifest(manifest_path);
    const tc::RunResult result = tc::run_pipeline(mf, cfg);
    tc::write_run_report(out_dir, result, cfg);
    for (const auto& f : result.extraction.failures) std::fprintf(stderr, "failed: %s\n", f.c_str());
    for (const auto& w : result.outcome.model.warnings)
        std::fprintf(stderr, "warning: %s\n", w.c_str());
    std::printf("channel %s, %d train / %d test rows, kept %zu of %d features\n",
                tc::channel_name(result.extraction.channel.channel).c_str(),
                result.outcome.train_rows, result.outcome.test_rows, result.outcome.kept.size(),
                result.extraction.features.cols());
    std::printf("overall accuracy %.4f\n", result.outcome.confusion.overall_accuracy());
    const auto& cmx = result.outcome.confusion;
    for (std::size_t i = 0; i < cmx.labels.size(); ++i)
        std::printf("  class %-16s accuracy %.4f (%lld tested)\n", cmx.labels[i].c_str(),
                    cmx.class_accuracy(static_cast<int>(i)),
                    static_cast<long long>(cmx.row_total(static_cast<int>(i))));
    std::printf("report written to %s\n", out_dir.c_str());
    return result.extraction.failures.empty() ? 0 : 2;
}

struct SynthOpts {
    std::string out;
    std::uint64_t seed = 1;
    int n0 = 10;
    int length = 15;
    int size = 512;
    bool with_craquelure = false;
    int cracks = 20;
    std::string measures = "CM,RLM,GMRF,FD";
    int se_size = 5;
};

int cmd_synth(const SynthOpts& o) {
    tc::SynthOptions opt;
    opt.scene.seed = o.seed;
    opt.scene.base_count = o.n0;
    opt.scene.length = o.length;
    opt.scene.width = o.size;
    opt.scene.height = o.size;
    opt.with_craquelure = o.with_craquelure;
    opt.craquelure.cracks = o.cracks;
    opt.craquelure.seed = o.seed;
    opt.measures = tc::parse_measure_list(o.measures);
    opt.se_size = o.se_size;
    tc::run_synth(o.out, opt);
    std::printf("wrote %d scene image(s)%s and susceptibility reports to %s\n", o.length,
                o.with_craquelure ? " (plus craquelure series)" : "", o.out.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"texture-based tissue image classification toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "texclass 1.0.0");
    int exit_code = 0;

    // channels
    auto ch = std::make_shared<std::tuple<std::string, std::string, double, std::string>>(
        "", "RGB,HSV,LAB,YCbCr", 1.25, "ranking.csv");
    auto* channels = app.add_subcommand("channels", "rank color channels by segmentation separability");
    channels->add_option("--samples", std::get<0>(*ch), "CSV of path,x,y,w,h,mask")
        ->required()
        ->check(CLI::ExistingFile);
    channels->add_option("--spaces", std::get<1>(*ch), "color spaces to rank");
    channels->add_option("--factor", std::get<2>(*ch), "box half-width in standard deviations");
    channels->add_option("--out", std::get<3>(*ch), "ranking CSV path");
    channels->callback([ch, &exit_code] {
        exit_code = cmd_channels(std::get<0>(*ch), std::get<1>(*ch), std::get<2>(*ch), std::get<3>(*ch));
    });

    // extract
    auto exm = std::make_shared<std::pair<std::string, std::string>>();
    auto exc = std::make_shared<ConfigOpts>();
    auto* extract = app.add_subcommand("extract", "extract texture features for a manifest");
    extract->add_option("--manifest", exm->first, "CSV of path,label,group")
        ->required()
        ->check(CLI::ExistingFile);
    extract->add_option("--out", exm->second, "feature CSV path")->required();
    add_config_flags(extract, *exc);
    extract->callback([exm, exc, &exit_code] { exit_code = cmd_extract(exm->first, *exc, exm->second); });

    // select
    auto sel = std::make_shared<std::tuple<std::string, double, std::string>>("", 0.8, "selection.csv");
    auto* select = app.add_subcommand("select", "rank features by divergence and prune correlated ones");
    select->add_option("--features", std::get<0>(*sel), "feature CSV")->required()->check(CLI::ExistingFile);
    select->add_option("--threshold", std::get<1>(*sel), "max |correlation| kept");
    select->add_option("--out", std::get<2>(*sel), "selection CSV path");
    select->callback([sel, &exit_code] {
        exit_code = cmd_select(std::get<0>(*sel), std::get<1>(*sel), std::get<2>(*sel));
    });

    // train
    auto tr = std::make_shared<std::tuple<std::string, std::string, std::string>>();
    auto trc = std::make_shared<ConfigOpts>();
    auto* train = app.add_subcommand("train", "fit the Gaussian classifier on a feature CSV");
    train->add_option("--features", std::get<0>(*tr), "feature CSV")->required()->check(CLI::ExistingFile);
    train->add_option("--model", std::get<1>(*tr), "output model path")->required();
    train->add_option("--selection", std::get<2>(*tr), "also write the selection CSV here");
    add_config_flags(train, *trc);
    train->callback([tr, trc, &exit_code] {
        exit_code = cmd_train(std::get<0>(*tr), *trc, std::get<1>(*tr), std::get<2>(*tr));
    });

    // predict
    auto pr = std::make_shared<std::tuple<std::string, std::string, std::string>>(
        "", "", "predictions.csv");
    auto* predict = app.add_subcommand("predict", "classify rows of a feature CSV");
    predict->add_option("--model", std::get<0>(*pr), "model file")->required()->check(CLI::ExistingFile);
    predict->add_option("--features", std::get<1>(*pr), "feature CSV")->required()->check(CLI::ExistingFile);
    predict->add_option("--out", std::get<2>(*pr), "predictions CSV path");
    predict->callback([pr, &exit_code] {
        exit_code = cmd_predict(std::get<0>(*pr), std::get<1>(*pr), std::get<2>(*pr));
    });

    // run
    auto rn = std::make_shared<std::pair<std::string, std::string>>();
    auto rnc = std::make_shared<ConfigOpts>();
    auto* run = app.add_subcommand("run", "extract, select, train and evaluate with a group holdout");
    run->add_option("--manifest", rn->first, "CSV of path,label,group")
        ->required()
        ->check(CLI::ExistingFile);
    run->add_option("--out", rn->second, "output directory")->required();
    add_config_flags(run, *rnc);
    run->callback([rn, rnc, &exit_code] { exit_code = cmd_run(rn->first, *rnc, rn->second); });

    // synth
    auto sy = std::make_shared<SynthOpts>();
    auto* synth = app.add_subcommand("synth", "generate the pseudo-nuclei benchmark series");
    synth->add_option("--out", sy->out, "output directory")->required();
    synth->add_option("--seed", sy->seed, "generator seed");
    synth->add_option("--n0", sy->n0, "shape count of the first image");
    synth->add_option("--length", sy->length, "series length");
    synth->add_option("--size", sy->size, "canvas width and height");
    synth->add_flag("--with-craquelure", sy->with_craquelure, "also emit a crack-distorted series");
    synth->add_option("--cracks", sy->cracks, "crack count per image");
    synth->add_option("--measures", sy->measures, "measure subset for the profile");
    synth->add_option("--se-size", sy->se_size, "gradient structuring element size");
    synth->callback([sy, &exit_code] { exit_code = cmd_synth(*sy); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    } catch (const tc::DegeneracyError& e) {
        std::fprintf(stderr, "degeneracy: %s\n", e.what());
        return 3;
    } catch (const tc::DataError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return exit_code;
}
