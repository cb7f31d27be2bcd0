#include "texclass/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <set>

#include "texclass/errors.hpp"

namespace texclass {

namespace {

// Regularizes in place, then caches the inverse and log-determinant.
void finalize_class(ClassModel& cm) {
    const int d = static_cast<int>(cm.cov.rows());
    const double tr = cm.cov.trace();
    double lambda = 1e-6 * tr / static_cast<double>(d);
    if (!(lambda > 0.0)) lambda = 1e-9;
    for (int attempt = 0; attempt < 4; ++attempt) {
        Eigen::MatrixXd reg = cm.cov + lambda * Eigen::MatrixXd::Identity(d, d);
        Eigen::LLT<Eigen::MatrixXd> llt(reg);
        if (llt.info() == Eigen::Success) {
            cm.cov = std::move(reg);
            cm.cov_inv = llt.solve(Eigen::MatrixXd::Identity(d, d));
            cm.log_det = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
            return;
        }
        lambda *= 1e3;
    }
    throw DegeneracyError("class " + cm.label +
                          ": covariance is not positive definite even after regularization");
}

void cache_inverse(ClassModel& cm) {
    const int d = static_cast<int>(cm.cov.rows());
    Eigen::LLT<Eigen::MatrixXd> llt(cm.cov);
    if (llt.info() != Eigen::Success)
        throw DegeneracyError("class " + cm.label + ": stored covariance is not positive definite");
    cm.cov_inv = llt.solve(Eigen::MatrixXd::Identity(d, d));
    cm.log_det = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

}  // namespace

std::int64_t ConfusionMatrix::total() const {
    std::int64_t s = 0;
    for (std::int64_t c : counts) s += c;
    return s;
}

std::int64_t ConfusionMatrix::row_total(int t) const {
    std::int64_t s = 0;
    for (std::size_t p = 0; p < labels.size(); ++p) s += at(t, static_cast<int>(p));
    return s;
}

double ConfusionMatrix::overall_accuracy() const {
    const std::int64_t n = total();
    if (n == 0) return 0.0;
    std::int64_t diag = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) diag += at(static_cast<int>(i), static_cast<int>(i));
    return static_cast<double>(diag) / static_cast<double>(n);
}

double ConfusionMatrix::class_accuracy(int t) const {
    const std::int64_t n = row_total(t);
    if (n == 0) return 0.0;
    return static_cast<double>(at(t, t)) / static_cast<double>(n);
}

GaussianClassModel train(const FeatureMatrix& m, bool diagonal) {
    m.validate();
    if (m.rows() < 1 || m.cols() < 1) throw DataError("train: empty feature matrix");
    const auto labels = m.class_labels();
    const int d = m.cols();
    const int n = m.rows();

    GaussianClassModel model;
    model.feature_names = m.feature_names;
    model.diagonal = diagonal;

    Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < d; ++c) mean(c) += m.at(r, c);
    mean /= static_cast<double>(n);
    Eigen::VectorXd var = Eigen::VectorXd::Zero(d);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < d; ++c) {
            const double dv = m.at(r, c) - mean(c);
            var(c) += dv * dv;
        }
    var /= static_cast<double>(n);
    model.std_mean = mean;
    model.std_scale = var.array().sqrt().matrix();
    for (int c = 0; c < d; ++c)
        if (!(model.std_scale(c) > 0.0)) model.std_scale(c) = 1.0;

    Eigen::MatrixXd Z(n, d);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < d; ++c) Z(r, c) = (m.at(r, c) - mean(c)) / model.std_scale(c);

    for (const auto& lab : labels) {
        std::vector<int> rows;
        for (int r = 0; r < n; ++r)
            if (m.labels[r] == lab) rows.push_back(r);
        if (rows.size() < 2)
            throw DataError("train: class " + lab + " has fewer than two samples");
        if (static_cast<int>(rows.size()) <= d)
            model.warnings.push_back("class " + lab + " has " + std::to_string(rows.size()) +
                                     " samples for " + std::to_string(d) +
                                     " features; covariance estimate is regularization-dominated");
        ClassModel cm;
        cm.label = lab;
        cm.mean = Eigen::VectorXd::Zero(d);
        for (int r : rows) cm.mean += Z.row(r).transpose();
        cm.mean /= static_cast<double>(rows.size());
        cm.cov = Eigen::MatrixXd::Zero(d, d);
        for (int r : rows) {
            const Eigen::VectorXd dv = Z.row(r).transpose() - cm.mean;
            cm.cov += dv * dv.transpose();
        }
        cm.cov /= static_cast<double>(rows.size());
        if (diagonal) cm.cov = cm.cov.diagonal().asDiagonal();
        finalize_class(cm);
        model.classes.push_back(std::move(cm));
    }
    return model;
}

Prediction predict(const GaussianClassModel& model, const std::vector<double>& x) {
    if (model.classes.empty()) throw DataError("predict: model has no classes");
    if (static_cast<int>(x.size()) != model.dim())
        throw DataError("predict: expected " + std::to_string(model.dim()) + " features, got " +
                        std::to_string(x.size()));
    Eigen::VectorXd z(model.dim());
    for (int i = 0; i < model.dim(); ++i) {
        if (!std::isfinite(x[i])) throw DataError("predict: non-finite feature value");
        z(i) = (x[i] - model.std_mean(i)) / model.std_scale(i);
    }
    Prediction p;
    p.scores.reserve(model.classes.size());
    const double c0 = model.dim() * std::log(2.0 * std::numbers::pi);
    double best = -std::numeric_limits<double>::infinity();
    std::size_t best_idx = 0;
    for (std::size_t i = 0; i < model.classes.size(); ++i) {
        const auto& cm = model.classes[i];
        const Eigen::VectorXd dv = z - cm.mean;
        const double mahal = dv.dot(cm.cov_inv * dv);
        const double s = -0.5 * (c0 + cm.log_det + mahal);
        p.scores.push_back(s);
        if (s > best) {  // strict: ties stay with the earlier (lower) label
            best = s;
            best_idx = i;
        }
    }
    p.label = model.classes[best_idx].label;
    return p;
}

HoldoutPlan make_holdout_plan(const FeatureMatrix& m, std::uint64_t seed, double train_fraction) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw std::invalid_argument("train_fraction must lie in (0,1)");
    HoldoutPlan plan;
    plan.seed = seed;
    plan.train_fraction = train_fraction;
    std::map<std::string, std::set<std::string>> groups_of;
    for (int r = 0; r < m.rows(); ++r) groups_of[m.labels[r]].insert(m.groups[r]);
    std::mt19937_64 rng(seed);
    for (const auto& [lab, gset] : groups_of) {
        std::vector<std::string> groups(gset.begin(), gset.end());
        const int g = static_cast<int>(groups.size());
        if (g < 2)
            throw DataError("holdout: class " + lab + " needs at least two patient groups");
        // explicit Fisher-Yates so the plan only depends on the seed,
        // not on the standard library's shuffle
        for (int i = g - 1; i > 0; --i) {
            const int j = static_cast<int>(rng() % static_cast<std::uint64_t>(i + 1));
            std::swap(groups[i], groups[j]);
        }
        int ntrain = static_cast<int>(std::lround(train_fraction * g));
        ntrain = std::clamp(ntrain, 1, g - 1);
        std::vector<std::string> tr(groups.begin(), groups.begin() + ntrain);
        std::vector<std::string> te(groups.begin() + ntrain, groups.end());
        std::sort(tr.begin(), tr.end());
        std::sort(te.begin(), te.end());
        plan.train_groups[lab] = std::move(tr);
        plan.test_groups[lab] = std::move(te);
    }
    return plan;
}

HoldoutOutcome evaluate_holdout(const FeatureMatrix& m, const HoldoutPlan& plan,
                                const EvalSettings& settings) {
    m.validate();
    auto contains = [](const std::vector<std::string>& v, const std::string& x) {
        return std::find(v.begin(), v.end(), x) != v.end();
    };
    std::vector<int> train_rows, test_rows;
    for (int r = 0; r < m.rows(); ++r) {
        const std::string& lab = m.labels[r];
        const auto ti = plan.train_groups.find(lab);
        const auto si = plan.test_groups.find(lab);
        const bool in_train = ti != plan.train_groups.end() && contains(ti->second, m.groups[r]);
        const bool in_test = si != plan.test_groups.end() && contains(si->second, m.groups[r]);
        if (in_train == in_test)
            throw DataError("holdout plan must place group " + m.groups[r] + " of class " + lab +
                            " in exactly one partition");
        (in_train ? train_rows : test_rows).push_back(r);
    }
    if (train_rows.empty()) throw DataError("holdout: empty train partition");
    if (test_rows.empty()) throw DataError("holdout: empty test partition");

    const FeatureMatrix train_m = m.select_rows(train_rows);
    HoldoutOutcome out;
    out.train_rows = static_cast<int>(train_rows.size());
    out.test_rows = static_cast<int>(test_rows.size());
    if (settings.select) {
        out.ranking = divergence(train_m);
        out.selection = prune(train_m, out.ranking, settings.correlation_threshold);
        out.kept = out.selection.kept;
        if (out.kept.empty()) throw DegeneracyError("holdout: selection kept no features");
    } else {
        out.kept = m.feature_names;
    }
    out.model = train(train_m.select_columns(out.kept), settings.diagonal_covariance);

    const auto labels = m.class_labels();
    out.confusion.labels = labels;
    out.confusion.counts.assign(labels.size() * labels.size(), 0);
    std::map<std::string, int> row_of;
    for (std::size_t i = 0; i < labels.size(); ++i) row_of[labels[i]] = static_cast<int>(i);
    std::vector<int> cols;
    cols.reserve(out.kept.size());
    for (const auto& name : out.kept) cols.push_back(m.find_feature(name));
    std::vector<double> x(cols.size());
    for (int r : test_rows) {
        for (std::size_t i = 0; i < cols.size(); ++i) x[i] = m.at(r, cols[i]);
        const Prediction p = predict(out.model, x);
        ++out.confusion.at(row_of.at(m.labels[r]), row_of.at(p.label));
    }
    return out;
}

void save_model(const std::string& path, const GaussianClassModel& model) {
    if (model.classes.empty()) throw DataError("save_model: model has no classes");
    for (const auto& name : model.feature_names)
        if (name.empty() || name.find_first_of(" \t\r\n") != std::string::npos)
            throw DataError("save_model: feature name unusable as a token: '" + name + "'");
    for (const auto& cm : model.classes)
        if (cm.label.empty() || cm.label.find_first_of(" \t\r\n") != std::string::npos)
            throw DataError("save_model: class label unusable as a token: '" + cm.label + "'");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open " + path + " for writing");
    char buf[64];
    auto put = [&](double v) {
        if (!std::isfinite(v)) throw DataError("save_model: non-finite model value");
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        out << buf;
    };
    out << "texclass-model 1\n";
    out << "mode " << (model.diagonal ? "diagonal" : "full") << '\n';
    out << "features " << model.dim() << '\n';
    for (int i = 0; i < model.dim(); ++i) {
        out << model.feature_names[i] << ' ';
        put(model.std_mean(i));
        out << ' ';
        put(model.std_scale(i));
        out << '\n';
    }
    out << "classes " << model.classes.size() << '\n';
    for (const auto& cm : model.classes) {
        out << "class " << cm.label << '\n';
        out << "mean";
        for (int i = 0; i < model.dim(); ++i) {
            out << ' ';
            put(cm.mean(i));
        }
        out << "\ncov\n";
        for (int i = 0; i < model.dim(); ++i) {
            for (int j = 0; j < model.dim(); ++j) {
                if (j) out << ' ';
                put(cm.cov(i, j));
            }
            out << '\n';
        }
    }
    out << "end\n";
    if (!out) throw DataError("write failed: " + path);
}

GaussianClassModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open model file " + path);
    auto bad = [&](const std::string& what) { return DataError("model file " + path + ": " + what); };
    std::string tag;
    int version = 0;
    in >> tag >> version;
    if (!in || tag != "texclass-model") throw bad("missing header");
    if (version != 1) throw bad("unsupported version " + std::to_string(version));
    std::string kw, mode;
    in >> kw >> mode;
    if (!in || kw != "mode" || (mode != "full" && mode != "diagonal")) throw bad("bad mode line");
    GaussianClassModel model;
    model.diagonal = mode == "diagonal";
    int nf = 0;
    in >> kw >> nf;
    if (!in || kw != "features" || nf < 1) throw bad("bad features line");
    model.std_mean.resize(nf);
    model.std_scale.resize(nf);
    for (int i = 0; i < nf; ++i) {
        std::string name;
        in >> name >> model.std_mean(i) >> model.std_scale(i);
        if (!in) throw bad("truncated feature list");
        if (!(model.std_scale(i) > 0.0)) throw bad("nonpositive scale for feature " + name);
        model.feature_names.push_back(name);
    }
    int nc = 0;
    in >> kw >> nc;
    if (!in || kw != "classes" || nc < 1) throw bad("bad classes line");
    for (int k = 0; k < nc; ++k) {
        ClassModel cm;
        in >> kw >> cm.label;
        if (!in || kw != "class") throw bad("bad class header");
        in >> kw;
        if (!in || kw != "mean") throw bad("missing mean");
        cm.mean.resize(nf);
        for (int i = 0; i < nf; ++i) in >> cm.mean(i);
        in >> kw;
        if (!in || kw != "cov") throw bad("missing cov");
        cm.cov.resize(nf, nf);
        for (int i = 0; i < nf; ++i)
            for (int j = 0; j < nf; ++j) in >> cm.cov(i, j);
        if (!in) throw bad("truncated class block");
        if (!cm.mean.allFinite() || !cm.cov.allFinite()) throw bad("non-finite class values");
        if (!model.classes.empty() && cm.label <= model.classes.back().label)
            throw bad("class labels must be strictly ascending");
        cache_inverse(cm);
        model.classes.push_back(std::move(cm));
    }
    in >> kw;
    if (!in || kw != "end") throw bad("missing end marker");
    if (!model.std_mean.allFinite()) throw bad("non-finite standardization values");
    return model;
}

void write_confusion_csv(const std::string& path, const ConfusionMatrix& cm) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open " + path + " for writing");
    out << "true_label";
    for (const auto& lab : cm.labels) out << ",pred_" << lab;
    out << '\n';
    for (std::size_t t = 0; t < cm.labels.size(); ++t) {
        out << cm.labels[t];
        for (std::size_t p = 0; p < cm.labels.size(); ++p)
            out << ',' << cm.at(static_cast<int>(t), static_cast<int>(p));
        out << '\n';
    }
    if (!out) throw DataError("write failed: " + path);
}

}  // namespace texclass
