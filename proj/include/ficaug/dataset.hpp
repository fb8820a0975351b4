#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ficaug/vecmath.hpp"

namespace ficaug {

struct Sample {
    Vec features;
    int label = 0;
    std::optional<std::string> subject_id;
    std::optional<int> view;
};

/// Labeled tabular dataset. Label and view indices refer to the sorted name
/// lists; feature order is the source file's column order and every
/// downstream index refers to it.
struct FeatureDataset {
    std::vector<Sample> samples;
    std::vector<std::string> feature_names;
    std::vector<std::string> label_names;
    std::vector<std::string> view_names; // empty when no view key

    std::size_t size() const { return samples.size(); }
    std::size_t dim() const { return feature_names.size(); }
    int n_labels() const { return static_cast<int>(label_names.size()); }
    bool has_views() const { return !view_names.empty(); }
    bool has_subjects() const {
        return !samples.empty() && samples.front().subject_id.has_value();
    }

    Rows feature_rows() const;
    std::vector<int> labels() const;
    std::vector<int> label_histogram() const;

    // Throws DatasetError / SchemaError when an invariant is broken.
    void validate() const;
};

struct ColumnSchema {
    std::string label_col = "label";
    std::optional<std::string> subject_col;
    std::optional<std::string> view_col;
    // Explicit feature columns; when unset, every remaining column whose
    // first data cell parses as a number is taken as a feature, in file
    // order.
    std::optional<std::vector<std::string>> feature_cols;
};

FeatureDataset load_dataset(const std::string& path, const ColumnSchema& schema);

// Canonical serialization: header + one row per sample, full precision.
// load(save(ds)) reproduces the dataset bit-exactly.
void save_dataset(const FeatureDataset& ds, const std::string& path);

struct ScalingParams {
    Vec mean;
    Vec std_dev;                 // population std; unused for constant features
    std::vector<bool> constant;  // zero-variance features passed through
};

// Per-feature zero-mean / unit-variance transform. Constant features are
// passed through unchanged and flagged.
std::pair<FeatureDataset, ScalingParams> standardize(const FeatureDataset& ds);
FeatureDataset unstandardize(const FeatureDataset& ds, const ScalingParams& p);

// Apply previously fitted scaling parameters (e.g. the training set's) to
// another dataset.
FeatureDataset apply_scaling(const FeatureDataset& ds, const ScalingParams& p);

// One sub-dataset per view, original order preserved within each view.
std::vector<FeatureDataset> split_by_view(const FeatureDataset& ds);

// Sample subset in the given id order; names are shared. Does not
// re-validate.
FeatureDataset subset(const FeatureDataset& ds, const std::vector<int>& ids);

} // namespace ficaug
