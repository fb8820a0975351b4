#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "ficaug/dataset.hpp"
#include "ficaug/folds.hpp"
#include "ficaug/sampler.hpp"

namespace ficaug {

struct KnnConfig {
    int k_neighbors = 3;
};

/// Nearest-neighbour classifier, Euclidean metric. Distance ties go to the
/// lower training index, vote ties to the smaller class index.
class KnnModel {
public:
    KnnModel() = default;
    KnnModel(Rows train, std::vector<int> labels, int n_labels, KnnConfig cfg);

    int predict(const Vec& x) const;
    bool fitted() const { return !train_.empty(); }

private:
    Rows train_;
    std::vector<int> labels_;
    int n_labels_ = 0;
    KnnConfig cfg_;
};

struct MlpConfig {
    int hidden = 16;
    double learning_rate = 0.05;
    int epochs = 500;
    int batch_size = 0; // 0 = full batch
    double l2 = 1e-4;
    std::uint64_t seed = 0;
};

/// One-hidden-layer network: rectifier hidden units, softmax output,
/// cross-entropy loss with L2 on the weights. Trained by mini-batch
/// gradient descent with a seed-fixed shuffle schedule.
class MlpModel {
public:
    MlpModel() = default;
    MlpModel(int d_in, int hidden, int n_labels, std::uint64_t seed);

    Vec predict_proba(const Vec& x) const;
    int predict(const Vec& x) const;

    // flat parameter block: W1 (h x d), b1 (h), W2 (L x h), b2 (L)
    Vec& params() { return theta_; }
    const Vec& params() const { return theta_; }

    // Mean cross-entropy plus 0.5 * l2 * ||W||^2 over the batch; fills
    // grad (same layout as params) when non-null.
    double loss_and_grad(const Rows& X, const std::vector<int>& y, double l2,
                         Vec* grad) const;

    double final_loss() const { return final_loss_; }
    const Vec& loss_trace() const { return loss_trace_; }

    static MlpModel train(const Rows& X, const std::vector<int>& y, int n_labels,
                          const MlpConfig& cfg);

private:
    int d_ = 0, h_ = 0, n_labels_ = 0;
    Vec theta_;
    double final_loss_ = 0.0;
    Vec loss_trace_;
};

struct TrainedModel {
    std::variant<KnnModel, MlpModel> impl;
    int predict(const Vec& x) const {
        return std::visit([&](const auto& m) { return m.predict(x); }, impl);
    }
};

enum class AugMethod { Baseline, GaussianNoise, Ficaug };

std::string method_name(AugMethod m);
AugMethod method_from_name(const std::string& name);

struct CvConfig {
    std::uint64_t run_seed = 0;
    RefinementConfig refine;
    AugmentConfig augment;
    double gn_sigma = 0.1;
    KnnConfig knn;
    MlpConfig mlp;
};

struct FoldResult {
    int fold = 0;
    AugMethod method = AugMethod::Baseline;
    std::string classifier_id;
    double validation_accuracy = 0.0; // 0, 0.5 or 1 for a two-sample pair
    double weight = 0.0;              // equals validation_accuracy
    std::array<int, 2> validation_ids{};
    std::array<int, 2> validation_pred{};
    bool empty_augmentation = false;
    int view = -1; // set by compare_methods when the dataset has views
    std::shared_ptr<const TrainedModel> model;
};

// Leave-pair-out cross-validation. Augmentation is fit and sampled from the
// fold's training samples only; the classifier trains on training plus
// synthetic and is scored on the held-out pair. An empty synthetic batch
// downgrades the fold to baseline with a warning flag.
std::vector<FoldResult> run_cv(const FeatureDataset& ds_train, AugMethod method,
                               const std::string& classifier_id, const CvConfig& cfg);

struct EnsembleResult {
    std::vector<std::string> subject_keys; // sorted
    std::vector<int> final_labels;         // all-view vote per subject
    std::vector<int> true_labels;
    std::vector<std::map<int, double>> tallies; // per subject, label -> weight
    std::map<int, double> per_view_accuracy;    // view index -> accuracy
    double all_view_accuracy = 0.0;
    bool zero_weight_fallback = false;
};

// Each model votes its predicted label for every test sample of its view,
// weighted by its validation accuracy; votes aggregate per subject across
// views. Zero-weight models are excluded unless every weight is zero, in
// which case voting falls back to unweighted.
EnsembleResult weighted_majority_vote(const std::vector<FoldResult>& results,
                                      const FeatureDataset& test);

struct AlphaSearchResult {
    double best_alpha = 0.0;
    std::vector<std::pair<double, double>> table; // (alpha, mean validation acc)
    std::vector<FoldResult> best_results;
};

// Runs run_cv once per candidate; the best alpha is the highest mean
// validation accuracy, ties to the smaller alpha.
AlphaSearchResult grid_search_alpha(const FeatureDataset& ds, std::vector<double> alphas,
                                    AugMethod method, const std::string& classifier_id,
                                    const CvConfig& cfg);

struct ExperimentReport {
    struct Row {
        std::string method;
        std::string classifier;
        std::string view; // view name, or "all" for the ensemble row
        double mean_validation = 0.0;
        double std_validation = 0.0; // population std over folds; 0 on "all"
        int n_folds = 0;
        double alpha = 0.0; // 0 when the method takes no alpha
        bool has_test = false;
        double test_accuracy = 0.0;
        int warnings = 0; // folds that fell back to baseline
    };
    std::vector<Row> rows;
    std::map<std::string, std::string> metadata;
};

// Full cross of method x classifier x view plus an all-views ensemble row.
// When alpha_grid is non-empty, augmenting methods pick alpha per
// (classifier, view) by validation grid search. The optional test set is
// scored only by the final ensembles.
ExperimentReport compare_methods(const FeatureDataset& ds,
                                 const std::vector<AugMethod>& methods,
                                 const std::vector<std::string>& classifiers,
                                 const CvConfig& cfg, const std::vector<double>& alpha_grid,
                                 const FeatureDataset* test);

std::string render_experiment(const ExperimentReport& report);
std::string experiment_to_json(const ExperimentReport& report);

} // namespace ficaug
