#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "texclass/features.hpp"
#include "texclass/selection.hpp"

namespace texclass {

/// One class of the Gaussian model, in standardized feature space.
struct ClassModel {
    std::string label;
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;      // regularized, symmetric positive definite
    Eigen::MatrixXd cov_inv;
    double log_det = 0.0;
};

struct GaussianClassModel {
    std::vector<std::string> feature_names;
    Eigen::VectorXd std_mean;   // train-set per-feature mean
    Eigen::VectorXd std_scale;  // train-set per-feature stddev, zeros replaced by 1
    bool diagonal = false;
    std::vector<ClassModel> classes;  // ascending label order
    std::vector<std::string> warnings;

    int dim() const { return static_cast<int>(feature_names.size()); }
};

struct Prediction {
    std::string label;
    std::vector<double> scores;  // log densities, aligned with model.classes
};

/// Counts with the true class on rows, predicted on columns.
struct ConfusionMatrix {
    std::vector<std::string> labels;
    std::vector<std::int64_t> counts;

    std::int64_t at(int t, int p) const { return counts[static_cast<std::size_t>(t) * labels.size() + p]; }
    std::int64_t& at(int t, int p) { return counts[static_cast<std::size_t>(t) * labels.size() + p]; }
    std::int64_t total() const;
    std::int64_t row_total(int t) const;
    double overall_accuracy() const;
    double class_accuracy(int t) const;
};

/// Group-level split: every patient group of a class lands in exactly one of
/// train or test.
struct HoldoutPlan {
    std::uint64_t seed = 0;
    double train_fraction = 0.8;
    std::map<std::string, std::vector<std::string>> train_groups;
    std::map<std::string, std::vector<std::string>> test_groups;
};

struct EvalSettings {
    bool select = true;
    double correlation_threshold = 0.8;
    bool diagonal_covariance = false;
};

/// Everything the holdout run produced; selection and the model are fitted on
/// train rows only.
struct HoldoutOutcome {
    ConfusionMatrix confusion;
    DivergenceRanking ranking;
    SelectionResult selection;
    GaussianClassModel model;
    std::vector<std::string> kept;
    int train_rows = 0;
    int test_rows = 0;
};

/// Maximum-likelihood fit: per-class mean and population covariance on
/// standardized features, covariance regularized with lambda*I where
/// lambda = 1e-6 * trace / dim. Classes need at least two samples.
GaussianClassModel train(const FeatureMatrix& m, bool diagonal = false);

/// Log-density scores per class; label is the argmax, ties going to the
/// lowest (first in ascending order) class label.
Prediction predict(const GaussianClassModel& model, const std::vector<double>& x);

/// Randomly assigns each class's groups to train or test, keeping
/// round(train_fraction * n_groups) in train (at least one on each side).
HoldoutPlan make_holdout_plan(const FeatureMatrix& m, std::uint64_t seed, double train_fraction = 0.8);

/// Splits rows by the plan, fits selection and the classifier on train rows,
/// scores test rows.
HoldoutOutcome evaluate_holdout(const FeatureMatrix& m, const HoldoutPlan& plan,
                                const EvalSettings& settings = {});

void save_model(const std::string& path, const GaussianClassModel& model);
GaussianClassModel load_model(const std::string& path);

void write_confusion_csv(const std::string& path, const ConfusionMatrix& cm);

}  // namespace texclass
