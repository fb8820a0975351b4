#include "ficaug/classify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "ficaug/errors.hpp"
#include "ficaug/rng.hpp"

namespace ficaug {

// ---------------------------------------------------------------- kNN

KnnModel::KnnModel(Rows train, std::vector<int> labels, int n_labels, KnnConfig cfg)
    : train_(std::move(train)), labels_(std::move(labels)), n_labels_(n_labels), cfg_(cfg) {
    if (cfg_.k_neighbors < 1)
        throw ArgumentError("k_neighbors must be positive");
    if (train_.size() != labels_.size())
        throw ShapeError("training matrix and label count differ");
    if (static_cast<std::size_t>(cfg_.k_neighbors) > train_.size())
        throw ConfigError("k_neighbors=" + std::to_string(cfg_.k_neighbors) +
                          " exceeds training size " + std::to_string(train_.size()));
}

int KnnModel::predict(const Vec& x) const {
    if (!fitted())
        throw StateError("kNN model is not fitted");
    std::vector<std::pair<double, int>> by_dist;
    by_dist.reserve(train_.size());
    for (std::size_t i = 0; i < train_.size(); ++i)
        by_dist.emplace_back(sq_dist(train_[i], x), static_cast<int>(i));
    std::sort(by_dist.begin(), by_dist.end()); // distance ties -> lower index
    std::vector<int> votes(static_cast<std::size_t>(n_labels_), 0);
    for (int i = 0; i < cfg_.k_neighbors; ++i)
        ++votes[static_cast<std::size_t>(
            labels_[static_cast<std::size_t>(by_dist[static_cast<std::size_t>(i)].second)])];
    int best = 0;
    for (int l = 1; l < n_labels_; ++l)
        if (votes[static_cast<std::size_t>(l)] > votes[static_cast<std::size_t>(best)])
            best = l;
    return best;
}

// ---------------------------------------------------------------- MLP

MlpModel::MlpModel(int d_in, int hidden, int n_labels, std::uint64_t seed)
    : d_(d_in), h_(hidden), n_labels_(n_labels) {
    if (d_ < 1 || h_ < 1 || n_labels_ < 2)
        throw ArgumentError("MLP needs d >= 1, hidden >= 1 and at least 2 classes");
    theta_.assign(static_cast<std::size_t>(h_ * d_ + h_ + n_labels_ * h_ + n_labels_), 0.0);
    Rng rng(seed);
    double lim1 = std::sqrt(6.0 / (d_ + h_));
    for (int i = 0; i < h_ * d_; ++i)
        theta_[static_cast<std::size_t>(i)] = (2.0 * rng.uniform01() - 1.0) * lim1;
    double lim2 = std::sqrt(6.0 / (h_ + n_labels_));
    const int w2_off = h_ * d_ + h_;
    for (int i = 0; i < n_labels_ * h_; ++i)
        theta_[static_cast<std::size_t>(w2_off + i)] = (2.0 * rng.uniform01() - 1.0) * lim2;
}

Vec MlpModel::predict_proba(const Vec& x) const {
    if (theta_.empty())
        throw StateError("MLP model is not initialized");
    if (static_cast<int>(x.size()) != d_)
        throw ShapeError("MLP input dimension mismatch");
    const double* w1 = theta_.data();
    const double* b1 = w1 + h_ * d_;
    const double* w2 = b1 + h_;
    const double* b2 = w2 + n_labels_ * h_;

    Vec a1(static_cast<std::size_t>(h_));
    for (int i = 0; i < h_; ++i) {
        double z = b1[i];
        for (int j = 0; j < d_; ++j)
            z += w1[i * d_ + j] * x[static_cast<std::size_t>(j)];
        a1[static_cast<std::size_t>(i)] = z > 0.0 ? z : 0.0;
    }
    Vec z2(static_cast<std::size_t>(n_labels_));
    double zmax = -1e300;
    for (int c = 0; c < n_labels_; ++c) {
        double z = b2[c];
        for (int i = 0; i < h_; ++i)
            z += w2[c * h_ + i] * a1[static_cast<std::size_t>(i)];
        z2[static_cast<std::size_t>(c)] = z;
        zmax = std::max(zmax, z);
    }
    double sum = 0.0;
    for (double& z : z2) {
        z = std::exp(z - zmax);
        sum += z;
    }
    for (double& z : z2)
        z /= sum;
    return z2;
}

int MlpModel::predict(const Vec& x) const {
    Vec p = predict_proba(x);
    int best = 0;
    for (std::size_t c = 1; c < p.size(); ++c)
        if (p[c] > p[static_cast<std::size_t>(best)])
            best = static_cast<int>(c);
    return best;
}

double MlpModel::loss_and_grad(const Rows& X, const std::vector<int>& y, double l2,
                               Vec* grad) const {
    const double* w1 = theta_.data();
    const double* b1 = w1 + h_ * d_;
    const double* w2 = b1 + h_;
    const double* b2 = w2 + n_labels_ * h_;
    const int w2_off = h_ * d_ + h_;
    const int b2_off = w2_off + n_labels_ * h_;

    if (grad)
        grad->assign(theta_.size(), 0.0);
    double loss = 0.0;
    Vec z1(static_cast<std::size_t>(h_)), a1(static_cast<std::size_t>(h_));
    Vec p(static_cast<std::size_t>(n_labels_));
    for (std::size_t s = 0; s < X.size(); ++s) {
        const Vec& x = X[s];
        for (int i = 0; i < h_; ++i) {
            double z = b1[i];
            for (int j = 0; j < d_; ++j)
                z += w1[i * d_ + j] * x[static_cast<std::size_t>(j)];
            z1[static_cast<std::size_t>(i)] = z;
            a1[static_cast<std::size_t>(i)] = z > 0.0 ? z : 0.0;
        }
        double zmax = -1e300;
        for (int c = 0; c < n_labels_; ++c) {
            double z = b2[c];
            for (int i = 0; i < h_; ++i)
                z += w2[c * h_ + i] * a1[static_cast<std::size_t>(i)];
            p[static_cast<std::size_t>(c)] = z;
            zmax = std::max(zmax, z);
        }
        double sum = 0.0;
        for (double& z : p) {
            z = std::exp(z - zmax);
            sum += z;
        }
        for (double& z : p)
            z /= sum;
        loss -= std::log(std::max(p[static_cast<std::size_t>(y[s])], 1e-300));

        if (!grad)
            continue;
        Vec& g = *grad;
        Vec dz2 = p;
        dz2[static_cast<std::size_t>(y[s])] -= 1.0;
        for (int c = 0; c < n_labels_; ++c) {
            for (int i = 0; i < h_; ++i)
                g[static_cast<std::size_t>(w2_off + c * h_ + i)] +=
                    dz2[static_cast<std::size_t>(c)] * a1[static_cast<std::size_t>(i)];
            g[static_cast<std::size_t>(b2_off + c)] += dz2[static_cast<std::size_t>(c)];
        }
        for (int i = 0; i < h_; ++i) {
            if (z1[static_cast<std::size_t>(i)] <= 0.0)
                continue;
            double da = 0.0;
            for (int c = 0; c < n_labels_; ++c)
                da += w2[c * h_ + i] * dz2[static_cast<std::size_t>(c)];
            for (int j = 0; j < d_; ++j)
                g[static_cast<std::size_t>(i * d_ + j)] += da * x[static_cast<std::size_t>(j)];
            g[static_cast<std::size_t>(h_ * d_ + i)] += da;
        }
    }

    const double inv_n = 1.0 / static_cast<double>(X.size());
    loss *= inv_n;
    if (grad)
        for (double& v : *grad)
            v *= inv_n;
    // L2 on weights only, biases excluded
    double reg = 0.0;
    for (int i = 0; i < h_ * d_; ++i)
        reg += theta_[static_cast<std::size_t>(i)] * theta_[static_cast<std::size_t>(i)];
    for (int i = 0; i < n_labels_ * h_; ++i)
        reg += theta_[static_cast<std::size_t>(w2_off + i)] *
               theta_[static_cast<std::size_t>(w2_off + i)];
    loss += 0.5 * l2 * reg;
    if (grad) {
        for (int i = 0; i < h_ * d_; ++i)
            (*grad)[static_cast<std::size_t>(i)] += l2 * theta_[static_cast<std::size_t>(i)];
        for (int i = 0; i < n_labels_ * h_; ++i)
            (*grad)[static_cast<std::size_t>(w2_off + i)] +=
                l2 * theta_[static_cast<std::size_t>(w2_off + i)];
    }
    return loss;
}

MlpModel MlpModel::train(const Rows& X, const std::vector<int>& y, int n_labels,
                         const MlpConfig& cfg) {
    if (X.empty() || X.size() != y.size())
        throw ShapeError("MLP training data is empty or inconsistent");
    MlpModel m(static_cast<int>(X.front().size()), cfg.hidden, n_labels,
               derive_seed(cfg.seed, "init"));

    const std::size_t n = X.size();
    const std::size_t bs = cfg.batch_size <= 0
                               ? n
                               : std::min<std::size_t>(static_cast<std::size_t>(cfg.batch_size), n);
    Rng shuffle_rng(derive_seed(cfg.seed, "shuffle"));
    std::vector<int> order(n);
    for (std::size_t i = 0; i < n; ++i)
        order[i] = static_cast<int>(i);

    Vec grad;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        double epoch_loss = 0.0;
        int n_batches = 0;
        if (bs < n)
            shuffle_rng.shuffle(order);
        for (std::size_t start = 0; start < n; start += bs) {
            const std::size_t stop = std::min(n, start + bs);
            Rows bx;
            std::vector<int> by;
            bx.reserve(stop - start);
            for (std::size_t i = start; i < stop; ++i) {
                bx.push_back(X[static_cast<std::size_t>(order[i])]);
                by.push_back(y[static_cast<std::size_t>(order[i])]);
            }
            double loss = m.loss_and_grad(bx, by, cfg.l2, &grad);
            if (!std::isfinite(loss))
                throw TrainingError("MLP training diverged (non-finite loss) at epoch " +
                                    std::to_string(epoch));
            epoch_loss += loss;
            ++n_batches;
            for (std::size_t i = 0; i < m.theta_.size(); ++i)
                m.theta_[i] -= cfg.learning_rate * grad[i];
        }
        m.loss_trace_.push_back(epoch_loss / n_batches);
    }
    m.final_loss_ = m.loss_and_grad(X, y, cfg.l2, nullptr);
    return m;
}

// ---------------------------------------------------------------- CV

std::string method_name(AugMethod m) {
    switch (m) {
    case AugMethod::Baseline:
        return "baseline";
    case AugMethod::GaussianNoise:
        return "gn";
    case AugMethod::Ficaug:
        return "ficaug";
    }
    return "?";
}

AugMethod method_from_name(const std::string& name) {
    if (name == "baseline")
        return AugMethod::Baseline;
    if (name == "gn" || name == "gaussian-noise")
        return AugMethod::GaussianNoise;
    if (name == "ficaug")
        return AugMethod::Ficaug;
    throw ArgumentError("unknown method '" + name + "' (expected baseline, gn or ficaug)");
}

std::vector<FoldResult> run_cv(const FeatureDataset& ds_train, AugMethod method,
                               const std::string& classifier_id, const CvConfig& cfg) {
    if (classifier_id != "knn" && classifier_id != "mlp")
        throw ArgumentError("unknown classifier '" + classifier_id + "' (expected knn or mlp)");

    FoldPlan plan = make_leave_pair_out_folds(ds_train, cfg.run_seed);
    std::vector<FoldResult> results;
    results.reserve(plan.folds.size());

    for (std::size_t f = 0; f < plan.folds.size(); ++f) {
        const FoldPlan::Fold& fold = plan.folds[f];
        const std::uint64_t fold_seed = derive_seed(cfg.run_seed, static_cast<std::uint64_t>(f));
        FeatureDataset sub = subset(ds_train, fold.training);

        SyntheticBatch batch;
        if (method == AugMethod::GaussianNoise) {
            batch = gaussian_noise_augment(sub, cfg.gn_sigma, cfg.augment.alpha,
                                           derive_seed(fold_seed, "noise"));
        } else if (method == AugMethod::Ficaug) {
            RefinementConfig rcfg = cfg.refine;
            rcfg.kmeans.seed = derive_seed(fold_seed, "cluster");
            AugmentConfig acfg = cfg.augment;
            acfg.seed = derive_seed(fold_seed, "sample");
            batch = augment_dataset(sub, rcfg, acfg).first;
        }

        FoldResult r;
        r.fold = static_cast<int>(f);
        r.method = method;
        r.classifier_id = classifier_id;
        r.empty_augmentation = method != AugMethod::Baseline && batch.points.empty();

        Rows X = sub.feature_rows();
        std::vector<int> y = sub.labels();
        for (std::size_t i = 0; i < batch.size(); ++i) {
            X.push_back(batch.points[i]);
            y.push_back(batch.labels[i]);
        }

        TrainedModel tm;
        if (classifier_id == "knn") {
            tm.impl = KnnModel(std::move(X), std::move(y), ds_train.n_labels(), cfg.knn);
        } else {
            MlpConfig mcfg = cfg.mlp;
            mcfg.seed = derive_seed(fold_seed, "mlp");
            tm.impl = MlpModel::train(X, y, ds_train.n_labels(), mcfg);
        }
        r.model = std::make_shared<const TrainedModel>(std::move(tm));

        int correct = 0;
        for (int s = 0; s < 2; ++s) {
            const int id = fold.validation[static_cast<std::size_t>(s)];
            const Sample& sample = ds_train.samples[static_cast<std::size_t>(id)];
            const int pred = r.model->predict(sample.features);
            r.validation_ids[static_cast<std::size_t>(s)] = id;
            r.validation_pred[static_cast<std::size_t>(s)] = pred;
            correct += pred == sample.label;
        }
        r.validation_accuracy = correct / 2.0;
        r.weight = r.validation_accuracy;
        results.push_back(std::move(r));
    }
    return results;
}

// ------------------------------------------------------------- voting

namespace {

std::string subject_key(const Sample& s, std::size_t idx) {
    if (s.subject_id)
        return *s.subject_id;
    return "s" + std::to_string(idx);
}

int argmax_label(const std::map<int, double>& tally) {
    int best = -1;
    double best_w = -1.0;
    for (const auto& [label, w] : tally) // map order: ties go to the smaller label
        if (w > best_w) {
            best_w = w;
            best = label;
        }
    return best;
}

} // namespace

EnsembleResult weighted_majority_vote(const std::vector<FoldResult>& results,
                                      const FeatureDataset& test) {
    if (results.empty())
        throw ArgumentError("cannot vote with no fold results");
    for (const FoldResult& r : results)
        if (!r.model)
            throw StateError("fold result is missing its model");

    bool any_positive = false;
    for (const FoldResult& r : results)
        any_positive = any_positive || r.weight > 0.0;

    EnsembleResult out;
    out.zero_weight_fallback = !any_positive;

    std::map<std::string, std::map<int, double>> tally;
    std::map<std::string, int> truth;
    std::map<int, std::map<std::string, std::map<int, double>>> view_tally;
    std::map<int, std::map<std::string, int>> view_truth;

    for (const FoldResult& r : results) {
        const double w = any_positive ? r.weight : 1.0;
        if (w <= 0.0)
            continue;
        for (std::size_t i = 0; i < test.size(); ++i) {
            const Sample& s = test.samples[i];
            const int sample_view = s.view ? *s.view : -1;
            if (r.view >= 0 && sample_view >= 0 && r.view != sample_view)
                continue;
            const int pred = r.model->predict(s.features);
            const std::string key = subject_key(s, i);
            tally[key][pred] += w;
            truth[key] = s.label;
            view_tally[sample_view][key][pred] += w;
            view_truth[sample_view][key] = s.label;
        }
    }

    int correct = 0;
    for (const auto& [key, t] : tally) {
        out.subject_keys.push_back(key);
        out.tallies.push_back(t);
        const int label = argmax_label(t);
        out.final_labels.push_back(label);
        out.true_labels.push_back(truth[key]);
        correct += label == truth[key];
    }
    out.all_view_accuracy =
        out.subject_keys.empty() ? 0.0 : static_cast<double>(correct) /
                                             static_cast<double>(out.subject_keys.size());

    for (const auto& [view, per_subject] : view_tally) {
        int ok = 0;
        for (const auto& [key, t] : per_subject)
            ok += argmax_label(t) == view_truth[view][key];
        out.per_view_accuracy[view] =
            static_cast<double>(ok) / static_cast<double>(per_subject.size());
    }
    return out;
}

AlphaSearchResult grid_search_alpha(const FeatureDataset& ds, std::vector<double> alphas,
                                    AugMethod method, const std::string& classifier_id,
                                    const CvConfig& cfg) {
    if (alphas.empty())
        throw ArgumentError("alpha grid must not be empty");
    std::sort(alphas.begin(), alphas.end());

    AlphaSearchResult out;
    double best_acc = -1.0;
    for (double alpha : alphas) {
        CvConfig c = cfg;
        c.augment.alpha = alpha;
        std::vector<FoldResult> results = run_cv(ds, method, classifier_id, c);
        double mean = 0.0;
        for (const FoldResult& r : results)
            mean += r.validation_accuracy;
        mean /= static_cast<double>(results.size());
        out.table.emplace_back(alpha, mean);
        if (mean > best_acc) { // ties keep the smaller alpha
            best_acc = mean;
            out.best_alpha = alpha;
            out.best_results = std::move(results);
        }
    }
    return out;
}

// ------------------------------------------------------------- compare

namespace {

std::pair<double, double> mean_and_std(const std::vector<FoldResult>& results) {
    double mean = 0.0;
    for (const FoldResult& r : results)
        mean += r.validation_accuracy;
    mean /= static_cast<double>(results.size());
    double var = 0.0;
    for (const FoldResult& r : results) {
        double d = r.validation_accuracy - mean;
        var += d * d;
    }
    return {mean, std::sqrt(var / static_cast<double>(results.size()))};
}

// Out-of-fold ensemble accuracy: every fold model votes on its own held-out
// pair, votes aggregate per subject across views.
double out_of_fold_accuracy(const std::vector<std::vector<FoldResult>>& per_view,
                            const std::vector<FeatureDataset>& views) {
    std::map<std::string, std::map<int, double>> tally;
    std::map<std::string, std::map<int, int>> counts; // unweighted fallback
    std::map<std::string, int> truth;
    for (std::size_t v = 0; v < per_view.size(); ++v) {
        for (const FoldResult& r : per_view[v]) {
            for (int s = 0; s < 2; ++s) {
                const int id = r.validation_ids[static_cast<std::size_t>(s)];
                const Sample& sample = views[v].samples[static_cast<std::size_t>(id)];
                std::string key = sample.subject_id
                                      ? *sample.subject_id
                                      : "v" + std::to_string(v) + ":s" + std::to_string(id);
                const int pred = r.validation_pred[static_cast<std::size_t>(s)];
                tally[key][pred] += r.weight;
                counts[key][pred] += 1;
                truth[key] = sample.label;
            }
        }
    }
    int correct = 0;
    for (const auto& [key, t] : tally) {
        double total = 0.0;
        for (const auto& [label, w] : t)
            total += w;
        int label;
        if (total > 0.0) {
            label = argmax_label(t);
        } else { // every vote for this subject had weight zero
            std::map<int, double> unweighted;
            for (const auto& [l, c] : counts[key])
                unweighted[l] = c;
            label = argmax_label(unweighted);
        }
        correct += label == truth[key];
    }
    return tally.empty() ? 0.0
                         : static_cast<double>(correct) / static_cast<double>(tally.size());
}

} // namespace

ExperimentReport compare_methods(const FeatureDataset& ds,
                                 const std::vector<AugMethod>& methods,
                                 const std::vector<std::string>& classifiers,
                                 const CvConfig& cfg, const std::vector<double>& alpha_grid,
                                 const FeatureDataset* test) {
    std::vector<FeatureDataset> views;
    std::vector<std::string> view_names;
    if (ds.has_views()) {
        views = split_by_view(ds);
        view_names = ds.view_names;
    } else {
        views = {ds};
        view_names = {"default"};
    }

    std::vector<FeatureDataset> test_views;
    if (test) {
        if (ds.has_views()) {
            if (!test->has_views() || test->view_names != ds.view_names)
                throw ConfigError("test set views do not match the training set");
            test_views = split_by_view(*test);
        } else {
            test_views = {*test};
        }
    }

    ExperimentReport report;
    for (AugMethod method : methods) {
        for (const std::string& classifier : classifiers) {
            std::vector<std::vector<FoldResult>> per_view_results;
            std::vector<FoldResult> pooled; // with view indices, for the test ensemble
            int total_folds = 0;

            for (std::size_t v = 0; v < views.size(); ++v) {
                double alpha_used = cfg.augment.alpha;
                std::vector<FoldResult> results;
                if (method != AugMethod::Baseline && !alpha_grid.empty()) {
                    AlphaSearchResult search =
                        grid_search_alpha(views[v], alpha_grid, method, classifier, cfg);
                    alpha_used = search.best_alpha;
                    results = std::move(search.best_results);
                } else {
                    results = run_cv(views[v], method, classifier, cfg);
                }

                ExperimentReport::Row row;
                row.method = method_name(method);
                row.classifier = classifier;
                row.view = view_names[v];
                std::tie(row.mean_validation, row.std_validation) = mean_and_std(results);
                row.n_folds = static_cast<int>(results.size());
                row.alpha = method == AugMethod::Baseline ? 0.0 : alpha_used;
                for (const FoldResult& r : results)
                    row.warnings += r.empty_augmentation;
                if (test) {
                    EnsembleResult ens = weighted_majority_vote(results, test_views[v]);
                    row.has_test = true;
                    row.test_accuracy = ens.all_view_accuracy;
                }
                report.rows.push_back(row);
                total_folds += static_cast<int>(results.size());

                for (FoldResult& r : results) {
                    FoldResult tagged = r;
                    tagged.view = ds.has_views() ? static_cast<int>(v) : -1;
                    pooled.push_back(std::move(tagged));
                }
                per_view_results.push_back(std::move(results));
            }

            ExperimentReport::Row all;
            all.method = method_name(method);
            all.classifier = classifier;
            all.view = "all";
            all.mean_validation = out_of_fold_accuracy(per_view_results, views);
            all.std_validation = 0.0;
            all.n_folds = total_folds;
            all.alpha = 0.0;
            for (const auto& results : per_view_results)
                for (const FoldResult& r : results)
                    all.warnings += r.empty_augmentation;
            if (test) {
                EnsembleResult ens = weighted_majority_vote(pooled, *test);
                all.has_test = true;
                all.test_accuracy = ens.all_view_accuracy;
            }
            report.rows.push_back(std::move(all));
        }
    }
    return report;
}

std::string render_experiment(const ExperimentReport& report) {
    std::ostringstream out;
    out << "method\tclassifier\tview\tvalidation\ttest\talpha\tfolds\twarnings\n";
    char buf[256];
    for (const auto& row : report.rows) {
        std::string validation;
        if (row.view == "all") {
            std::snprintf(buf, sizeof(buf), "%.2f", 100.0 * row.mean_validation);
            validation = buf;
        } else {
            std::snprintf(buf, sizeof(buf), "%.2f (+-%.2f)", 100.0 * row.mean_validation,
                          100.0 * row.std_validation);
            validation = buf;
        }
        std::string test = "-";
        if (row.has_test) {
            std::snprintf(buf, sizeof(buf), "%.2f", 100.0 * row.test_accuracy);
            test = buf;
        }
        std::snprintf(buf, sizeof(buf), "%s\t%s\t%s\t%s\t%s\t%g\t%d\t%d\n", row.method.c_str(),
                      row.classifier.c_str(), row.view.c_str(), validation.c_str(),
                      test.c_str(), row.alpha, row.n_folds, row.warnings);
        out << buf;
    }
    for (const auto& [key, value] : report.metadata)
        out << "# " << key << " = " << value << '\n';
    return out.str();
}

std::string experiment_to_json(const ExperimentReport& report) {
    nlohmann::json j;
    j["rows"] = nlohmann::json::array();
    for (const auto& row : report.rows) {
        nlohmann::json r;
        r["method"] = row.method;
        r["classifier"] = row.classifier;
        r["view"] = row.view;
        r["mean_validation"] = row.mean_validation;
        r["std_validation"] = row.std_validation;
        r["n_folds"] = row.n_folds;
        r["alpha"] = row.alpha;
        if (row.has_test)
            r["test_accuracy"] = row.test_accuracy;
        r["warnings"] = row.warnings;
        j["rows"].push_back(std::move(r));
    }
    j["metadata"] = report.metadata;
    return j.dump(2) + "\n";
}

} // namespace ficaug
