#include "texclass/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "texclass/color.hpp"
#include "texclass/errors.hpp"
#include "texclass/image_io.hpp"
#include "texclass/morphology.hpp"

namespace fs = std::filesystem;

namespace texclass {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = s.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

long long to_int(const std::string& s, const std::string& what) {
    const std::string t = trim(s);
    if (t.empty()) throw DataError(what + ": empty integer");
    char* end = nullptr;
    errno = 0;
    const long long v = std::strtoll(t.c_str(), &end, 10);
    if (errno != 0 || end != t.c_str() + t.size())
        throw DataError(what + ": bad integer '" + s + "'");
    return v;
}

std::uint64_t to_uint64(const std::string& s, const std::string& what) {
    const std::string t = trim(s);
    if (t.empty() || t[0] == '-') throw DataError(what + ": bad unsigned integer '" + s + "'");
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(t.c_str(), &end, 10);
    if (errno != 0 || end != t.c_str() + t.size())
        throw DataError(what + ": bad unsigned integer '" + s + "'");
    return v;
}

double to_double(const std::string& s, const std::string& what) {
    const std::string t = trim(s);
    if (t.empty()) throw DataError(what + ": empty number");
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(t.c_str(), &end);
    if (errno != 0 || end != t.c_str() + t.size()) throw DataError(what + ": bad number '" + s + "'");
    return v;
}

bool to_bool(const std::string& s, const std::string& what) {
    const std::string t = trim(s);
    if (t == "true" || t == "1" || t == "yes") return true;
    if (t == "false" || t == "0" || t == "no") return false;
    throw DataError(what + ": bad boolean '" + s + "' (want true/false)");
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hex16(std::uint64_t v) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

std::string fmt4(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

std::string resolve_against(const std::string& base_file, const std::string& path) {
    fs::path p(path);
    if (p.is_absolute()) return path;
    return (fs::path(base_file).parent_path() / p).string();
}

}  // namespace

void PipelineConfig::validate() const {
    if (channel != "auto")
        parse_channel(channel);  // throws on unknown names
    else if (samples.empty())
        throw DataError("channel=auto needs a samples file (samples=<csv>)");
    if (se_size < 3 || se_size % 2 == 0)
        throw DataError("se_size must be an odd integer >= 3");
    if (levels < 2 || levels > 256) throw DataError("levels must lie in [2, 256]");
    if (glcm_delta < 1) throw DataError("glcm_delta must be >= 1");
    if (fd_window < 5 || fd_window % 2 == 0) throw DataError("fd_window must be an odd integer >= 5");
    if (fd_max_scale < 2 || fd_max_scale > fd_window - 1)
        throw DataError("fd_max_scale must lie in [2, fd_window-1]");
    if (!(selection_threshold > 0.0 && selection_threshold <= 1.0))
        throw DataError("selection_threshold must lie in (0, 1]");
    if (covariance != "full" && covariance != "diagonal")
        throw DataError("covariance must be 'full' or 'diagonal'");
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw DataError("train_fraction must lie in (0, 1)");
    if (measures.empty()) throw DataError("measure set must not be empty");
    for (std::size_t i = 0; i < measures.size(); ++i)
        for (std::size_t j = i + 1; j < measures.size(); ++j)
            if (measures[i] == measures[j]) throw DataError("duplicate measure in measure set");
}

ExtractorConfig PipelineConfig::extractor() const {
    ExtractorConfig e;
    e.levels = levels;
    e.glcm_delta = glcm_delta;
    e.fd.window = fd_window;
    e.fd.max_scale = fd_max_scale;
    return e;
}

EvalSettings PipelineConfig::eval_settings() const {
    EvalSettings s;
    s.select = select;
    s.correlation_threshold = selection_threshold;
    s.diagonal_covariance = covariance == "diagonal";
    return s;
}

std::vector<Measure> parse_measure_list(const std::string& csv) {
    std::string norm = csv;
    for (char& c : norm)
        if (c == '&' || c == '+') c = ',';
    std::vector<Measure> out;
    for (const std::string& tok : split(norm, ',')) {
        const std::string t = trim(tok);
        if (t.empty()) continue;
        out.push_back(parse_measure(t));
    }
    if (out.empty()) throw DataError("empty measure list '" + csv + "'");
    std::vector<Measure> canon;
    for (Measure m : kAllMeasures)
        if (std::find(out.begin(), out.end(), m) != out.end()) canon.push_back(m);
    return canon;
}

std::string measure_list_name(const std::vector<Measure>& measures) {
    std::string out;
    for (Measure m : measures) {
        if (!out.empty()) out += '&';
        out += measure_name(m);
    }
    return out;
}

void apply_config_entry(PipelineConfig& cfg, const std::string& key, const std::string& value) {
    const std::string k = trim(key);
    const std::string v = trim(value);
    if (k == "channel")
        cfg.channel = v;
    else if (k == "samples")
        cfg.samples = v;
    else if (k == "se_size")
        cfg.se_size = static_cast<int>(to_int(v, k));
    else if (k == "levels")
        cfg.levels = static_cast<int>(to_int(v, k));
    else if (k == "glcm_delta")
        cfg.glcm_delta = static_cast<int>(to_int(v, k));
    else if (k == "fd_window")
        cfg.fd_window = static_cast<int>(to_int(v, k));
    else if (k == "fd_max_scale")
        cfg.fd_max_scale = static_cast<int>(to_int(v, k));
    else if (k == "select")
        cfg.select = to_bool(v, k);
    else if (k == "selection_threshold")
        cfg.selection_threshold = to_double(v, k);
    else if (k == "covariance")
        cfg.covariance = v;
    else if (k == "seed")
        cfg.seed = to_uint64(v, k);
    else if (k == "train_fraction")
        cfg.train_fraction = to_double(v, k);
    else if (k == "measures")
        cfg.measures = parse_measure_list(v);
    else
        throw DataError("unknown config key '" + k + "'");
}

PipelineConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open config file " + path);
    PipelineConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw DataError(path + ":" + std::to_string(lineno) + ": expected key=value");
        try {
            apply_config_entry(cfg, t.substr(0, eq), t.substr(eq + 1));
        } catch (const DataError& e) {
            throw DataError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return cfg;
}

std::string resolved_config_text(const PipelineConfig& cfg) {
    std::ostringstream out;
    out << "channel = " << cfg.channel << '\n';
    out << "samples = " << cfg.samples << '\n';
    out << "se_size = " << cfg.se_size << '\n';
    out << "levels = " << cfg.levels << '\n';
    out << "glcm_delta = " << cfg.glcm_delta << '\n';
    out << "fd_window = " << cfg.fd_window << '\n';
    out << "fd_max_scale = " << cfg.fd_max_scale << '\n';
    out << "select = " << (cfg.select ? "true" : "false") << '\n';
    out << "selection_threshold = " << fmt(cfg.selection_threshold) << '\n';
    out << "covariance = " << cfg.covariance << '\n';
    out << "seed = " << cfg.seed << '\n';
    out << "train_fraction = " << fmt(cfg.train_fraction) << '\n';
    std::string ms;
    for (Measure m : cfg.measures) {
        if (!ms.empty()) ms += ',';
        ms += measure_name(m);
    }
    out << "measures = " << ms << '\n';
    return out.str();
}

std::uint64_t config_hash(const PipelineConfig& cfg) { return fnv1a(resolved_config_text(cfg)); }

DatasetManifest read_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open manifest " + path);
    DatasetManifest mf;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (lineno == 1 && t == "path,label,group") continue;
        const auto fields = split(t, ',');
        if (fields.size() != 3)
            throw DataError(path + ":" + std::to_string(lineno) + ": expected path,label,group");
        ManifestRow row;
        row.path = trim(fields[0]);
        row.label = trim(fields[1]);
        row.group = trim(fields[2]);
        if (row.path.empty() || row.label.empty() || row.group.empty())
            throw DataError(path + ":" + std::to_string(lineno) + ": empty field");
        row.resolved = resolve_against(path, row.path);
        if (!fs::exists(row.resolved))
            throw DataError(path + ":" + std::to_string(lineno) + ": no such image: " + row.resolved);
        mf.rows.push_back(std::move(row));
    }
    if (mf.rows.empty()) throw DataError("manifest " + path + " lists no images");
    return mf;
}

std::vector<ChannelSample> read_samples(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open samples file " + path);
    std::vector<ChannelSample> samples;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (lineno == 1 && t == "path,x,y,w,h,mask") continue;
        const auto fields = split(t, ',');
        if (fields.size() != 6)
            throw DataError(path + ":" + std::to_string(lineno) + ": expected path,x,y,w,h,mask");
        const std::string where = path + ":" + std::to_string(lineno);
        ChannelSample s;
        s.image = load_image(resolve_against(path, trim(fields[0])));
        s.rect.x = static_cast<int>(to_int(fields[1], where + " x"));
        s.rect.y = static_cast<int>(to_int(fields[2], where + " y"));
        s.rect.w = static_cast<int>(to_int(fields[3], where + " w"));
        s.rect.h = static_cast<int>(to_int(fields[4], where + " h"));
        s.reference = load_mask(resolve_against(path, trim(fields[5])));
        if (s.reference.width != s.image.width || s.reference.height != s.image.height)
            throw DataError(where + ": mask size does not match the image");
        samples.push_back(std::move(s));
    }
    if (samples.empty()) throw DataError("samples file " + path + " lists no rows");
    return samples;
}

ChannelChoice resolve_channel(const PipelineConfig& cfg) {
    ChannelChoice choice;
    if (cfg.channel != "auto") {
        choice.channel = parse_channel(cfg.channel);
        return choice;
    }
    const auto samples = read_samples(cfg.samples);
    choice.autoranked = true;
    choice.ranking = rank_channels(
        samples, {ColorSpace::RGB, ColorSpace::HSV, ColorSpace::CIELAB, ColorSpace::YCbCr});
    if (choice.ranking.ranked.empty())
        throw DegeneracyError("channel ranking: every channel was excluded as degenerate");
    choice.channel = choice.ranking.ranked.front().channel;
    return choice;
}

ExtractOutcome extract_dataset(const DatasetManifest& manifest, const PipelineConfig& cfg) {
    cfg.validate();
    if (manifest.rows.empty()) throw DataError("empty manifest");
    ExtractOutcome out;
    out.channel = resolve_channel(cfg);
    const StructuringElement se = StructuringElement::square(cfg.se_size);
    const ExtractorConfig ecfg = cfg.extractor();

    const int n = static_cast<int>(manifest.rows.size());
    std::vector<std::vector<double>> vals(n);
    std::vector<std::string> errs(n);
    std::vector<std::uint8_t> ok(n, 0);
    std::vector<std::string> names;
    std::mutex names_mx;
    std::atomic<int> next{0};

    auto work = [&]() {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= n) return;
            try {
                const ColorImage img = load_image(manifest.rows[i].resolved);
                const GrayImage plane = extract_channel(img, out.channel.channel);
                const GrayImage grad = gradient(plane, se);
                NamedFeatures f = extract_measures(grad, cfg.measures, ecfg);
                {
                    std::lock_guard<std::mutex> lock(names_mx);
                    if (names.empty()) names = f.names;
                }
                vals[i] = std::move(f.values);
                ok[i] = 1;
            } catch (const std::exception& e) {
                errs[i] = manifest.rows[i].path + ": " + e.what();
            }
        }
    };
    const unsigned workers =
        std::max(1u, std::min(std::thread::hardware_concurrency(), static_cast<unsigned>(n)));
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();

    for (int i = 0; i < n; ++i) {
        if (!ok[i]) {
            out.failures.push_back(errs[i]);
            continue;
        }
        if (out.features.feature_names.empty()) out.features.feature_names = names;
        out.features.values.insert(out.features.values.end(), vals[i].begin(), vals[i].end());
        out.features.labels.push_back(manifest.rows[i].label);
        out.features.groups.push_back(manifest.rows[i].group);
        out.features.row_ids.push_back(manifest.rows[i].path);
    }
    if (out.features.rows() == 0)
        throw DataError("extraction failed for every image; first error: " + out.failures.front());
    return out;
}

RunResult run_pipeline(const DatasetManifest& manifest, const PipelineConfig& cfg) {
    RunResult r;
    r.extraction = extract_dataset(manifest, cfg);
    r.plan = make_holdout_plan(r.extraction.features, cfg.seed, cfg.train_fraction);
    r.outcome = evaluate_holdout(r.extraction.features, r.plan, cfg.eval_settings());
    return r;
}

void write_run_report(const std::string& dir, const RunResult& result, const PipelineConfig& cfg) {
    fs::create_directories(dir);
    const auto& features = result.extraction.features;
    write_feature_csv((fs::path(dir) / "features.csv").string(), features);
    if (cfg.select)
        write_selection_csv((fs::path(dir) / "selection.csv").string(), features,
                            result.outcome.ranking, result.outcome.selection);
    write_confusion_csv((fs::path(dir) / "confusion.csv").string(), result.outcome.confusion);
    save_model((fs::path(dir) / "model.txt").string(), result.outcome.model);

    std::ostringstream rep;
    rep << "texclass run report\n";
    rep << "config_hash " << hex16(config_hash(cfg)) << '\n';
    rep << "seed " << cfg.seed << "\n\n";
    rep << "[config]\n" << resolved_config_text(cfg) << '\n';

    rep << "[channel]\n";
    rep << "selected = " << channel_name(result.extraction.channel.channel) << '\n';
    rep << "autoranked = " << (result.extraction.channel.autoranked ? "true" : "false") << '\n';
    if (result.extraction.channel.autoranked) {
        for (const auto& s : result.extraction.channel.ranking.ranked)
            rep << "rank " << channel_name(s.channel) << " p_error " << fmt4(s.p_error) << '\n';
        for (const auto& s : result.extraction.channel.ranking.excluded)
            rep << "excluded " << channel_name(s.channel) << " (" << s.note << ")\n";
    }
    rep << '\n';

    rep << "[extraction]\n";
    rep << "images = " << (features.rows() + static_cast<int>(result.extraction.failures.size()))
        << '\n';
    rep << "extracted = " << features.rows() << '\n';
    rep << "failed = " << result.extraction.failures.size() << '\n';
    for (const auto& f : result.extraction.failures) rep << "failure " << f << '\n';
    rep << "features = " << features.cols() << '\n';
    rep << '\n';

    rep << "[split]\n";
    rep << "train_rows = " << result.outcome.train_rows << '\n';
    rep << "test_rows = " << result.outcome.test_rows << '\n';
    for (const auto& [lab, groups] : result.plan.train_groups) {
        rep << "class " << lab << " train:";
        for (const auto& g : groups) rep << ' ' << g;
        rep << " test:";
        for (const auto& g : result.plan.test_groups.at(lab)) rep << ' ' << g;
        rep << '\n';
    }
    rep << '\n';

    rep << "[selection]\n";
    if (cfg.select) {
        rep << "kept = " << result.outcome.kept.size() << " of " << features.cols() << '\n';
        rep << "kept_features =";
        for (const auto& k : result.outcome.kept) rep << ' ' << k;
        rep << '\n';
    } else {
        rep << "disabled (all " << features.cols() << " features used)\n";
    }
    rep << '\n';

    rep << "[model]\n";
    rep << "mode = " << (result.outcome.model.diagonal ? "diagonal" : "full") << '\n';
    for (const auto& w : result.outcome.model.warnings) rep << "warning " << w << '\n';
    rep << '\n';

    rep << "[results]\n";
    rep << "overall_accuracy = " << fmt4(result.outcome.confusion.overall_accuracy()) << '\n';
    for (std::size_t i = 0; i < result.outcome.confusion.labels.size(); ++i) {
        const int t = static_cast<int>(i);
        rep << "class " << result.outcome.confusion.labels[i] << " accuracy = "
            << fmt4(result.outcome.confusion.class_accuracy(t)) << " tested = "
            << result.outcome.confusion.row_total(t) << '\n';
    }

    std::ofstream out(fs::path(dir) / "report.txt", std::ios::binary);
    if (!out) throw DataError("cannot open " + dir + "/report.txt for writing");
    out << rep.str();
    if (!out) throw DataError("write failed: " + dir + "/report.txt");
}

namespace {

std::string synth_config_text(const SynthOptions& opt) {
    std::ostringstream out;
    const SceneSpec& s = opt.scene;
    out << "base_count = " << s.base_count << '\n';
    out << "length = " << s.length << '\n';
    out << "canvas = " << s.width << 'x' << s.height << '\n';
    out << "major = " << fmt(s.major_min) << ".." << fmt(s.major_max) << '\n';
    out << "aspect = " << fmt(s.aspect_min) << ".." << fmt(s.aspect_max) << '\n';
    out << "bend = " << fmt(s.bend_min) << ".." << fmt(s.bend_max) << '\n';
    out << "foreground = " << fmt(s.foreground) << '\n';
    out << "background = " << fmt(s.background) << '\n';
    out << "non_overlap = " << (s.non_overlap ? "true" : "false") << '\n';
    out << "max_attempts = " << s.max_attempts << '\n';
    out << "seed = " << s.seed << '\n';
    out << "with_craquelure = " << (opt.with_craquelure ? "true" : "false") << '\n';
    if (opt.with_craquelure) {
        const CraquelureSpec& c = opt.craquelure;
        out << "cracks = " << c.cracks << '\n';
        out << "crack_steps = " << c.steps << '\n';
        out << "crack_width = " << c.line_width << '\n';
        out << "crack_intensity = " << fmt(c.intensity) << '\n';
        out << "crack_turn = " << fmt(c.turn) << '\n';
        out << "crack_seed = " << c.seed << '\n';
    }
    std::string ms;
    for (Measure m : opt.measures) {
        if (!ms.empty()) ms += ',';
        ms += measure_name(m);
    }
    out << "measures = " << ms << '\n';
    out << "se_size = " << opt.se_size << '\n';
    out << "levels = " << opt.extractor.levels << '\n';
    out << "glcm_delta = " << opt.extractor.glcm_delta << '\n';
    out << "fd_window = " << opt.extractor.fd.window << '\n';
    out << "fd_max_scale = " << opt.extractor.fd.max_scale << '\n';
    return out.str();
}

void append_profile_summary(std::ostringstream& rep, const SusceptibilityProfile& prof) {
    for (std::size_t k = 0; k < prof.measures.size(); ++k) {
        const int m = static_cast<int>(k);
        rep << "measure " << measure_name(prof.measures[k]) << " range = " << fmt(prof.range(m));
        int nflag = 0;
        for (int i = 0; i < prof.images; ++i)
            if (prof.flag(i, m)) ++nflag;
        if (nflag) rep << " flagged = " << nflag;
        rep << '\n';
    }
    if (!prof.constant_features.empty()) {
        rep << "constant_features =";
        for (const auto& f : prof.constant_features) rep << ' ' << f;
        rep << '\n';
    }
}

}  // namespace

void run_synth(const std::string& dir, const SynthOptions& opt) {
    fs::create_directories(dir);
    const std::vector<GrayImage> series = generate_series(opt.scene);
    char name[64];
    for (std::size_t i = 0; i < series.size(); ++i) {
        std::snprintf(name, sizeof(name), "scene_%02zu.pgm", i + 1);
        write_pgm((fs::path(dir) / name).string(), series[i]);
    }
    const SusceptibilityProfile prof =
        susceptibility(series, opt.measures, opt.se_size, opt.extractor);
    write_susceptibility_csv((fs::path(dir) / "susceptibility.csv").string(), prof);
    write_susceptibility_svg((fs::path(dir) / "susceptibility.svg").string(), prof,
                             "Texture measure susceptibility");

    std::ostringstream rep;
    rep << "texclass synth report\n";
    rep << "config_hash " << hex16(fnv1a(synth_config_text(opt))) << '\n';
    rep << "seed " << opt.scene.seed << "\n\n";
    rep << "[config]\n" << synth_config_text(opt) << '\n';
    rep << "[susceptibility]\n";
    append_profile_summary(rep, prof);

    if (opt.with_craquelure) {
        std::vector<GrayImage> cracked;
        cracked.reserve(series.size());
        for (std::size_t i = 0; i < series.size(); ++i) {
            CraquelureSpec cs = opt.craquelure;
            cs.seed = opt.craquelure.seed + i;  // distinct cracks per image
            cracked.push_back(apply_craquelure(series[i], cs));
            std::snprintf(name, sizeof(name), "crack_%02zu.pgm", i + 1);
            write_pgm((fs::path(dir) / name).string(), cracked.back());
        }
        const SusceptibilityProfile cprof =
            susceptibility(cracked, opt.measures, opt.se_size, opt.extractor);
        write_susceptibility_csv((fs::path(dir) / "susceptibility_craquelure.csv").string(), cprof);
        write_susceptibility_svg((fs::path(dir) / "susceptibility_craquelure.svg").string(), cprof,
                                 "Susceptibility under craquelure distortion");
        rep << "\n[susceptibility_craquelure]\n";
        append_profile_summary(rep, cprof);
    }

    std::ofstream out(fs::path(dir) / "report.txt", std::ios::binary);
    if (!out) throw DataError("cannot open " + dir + "/report.txt for writing");
    out << rep.str();
    if (!out) throw DataError("write failed: " + dir + "/report.txt");
}

}  // namespace texclass
