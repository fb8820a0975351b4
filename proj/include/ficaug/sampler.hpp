#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ficaug/dataset.hpp"
#include "ficaug/purity.hpp"

namespace ficaug {

/// Sampling geometry estimated from one pure cluster.
struct ClusterGeometry {
    Vec mu;               // cluster mean
    double radius = 0.0;  // spread estimate, see cluster_radius
    Vec sigma_diag;       // diagonal covariance, each entry (radius/3)^2
    int source_label = 0;
    int source_size = 0;
};

struct SyntheticBatch {
    Rows points;
    std::vector<int> labels;
    // (source tree node path, draw index) per point
    std::vector<std::pair<std::string, int>> provenance;
    std::uint64_t seed = 0;
    double alpha = 0.0;
    std::vector<std::string> warnings;

    std::size_t size() const { return points.size(); }
};

struct AugmentConfig {
    double alpha = 1.0;
    std::uint64_t seed = 0;
    double singleton_scale = 0.01; // radius factor for single-point clusters
    double range_margin = 0.1;     // margin on the distance range
};

// Spread estimate for a cluster: max distance to the centroid plus a margin
// proportional to the distance range. Single-point clusters (and clusters
// whose points all coincide) fall back to singleton_scale times the mean
// feature std of the parent clustering step. Throws DegenerateGeometryError
// when even the fallback is zero.
double cluster_radius(const ClusterView& c, const Vec& parent_feature_stds,
                      const AugmentConfig& cfg);

// Isotropic diagonal covariance with per-coordinate std radius/3, keeping
// ~99.7% of each coordinate's mass within the radius.
Vec covariance_from_radius(double radius, std::size_t dim);

// q i.i.d. draws from N(mu, diag(sigma)). Deterministic given seed.
SyntheticBatch sample_synthetic(const ClusterGeometry& geo, int q, std::uint64_t seed,
                                const std::string& node_path);

// max(1, round(alpha * n)), round half to even.
int synthetic_budget(int n_cluster, double alpha);

// The full feature-space pipeline: refine, keep pure clusters, estimate
// geometry, and sample each cluster's budget. Per-cluster seeds derive from
// (cfg.seed, node path), so batch content is independent of traversal
// order. Clusters with degenerate geometry are skipped with a warning.
std::pair<SyntheticBatch, RefinementTree> augment_dataset(const FeatureDataset& ds,
                                                          const RefinementConfig& refine_cfg,
                                                          const AugmentConfig& aug_cfg);

// Baseline: round(alpha) noisy copies x + N(0, sigma^2 I) of every sample.
SyntheticBatch gaussian_noise_augment(const FeatureDataset& ds, double sigma, double alpha,
                                      std::uint64_t seed);

struct ClampRange {
    double lo = 0.0;
    double hi = 5.0;
};

struct ExportResult {
    std::size_t records = 0;
    std::size_t clamped_values = 0;
};

// Attribute-vector export for an external generator: header
// `id,label,<feature names>`, one record per synthetic point at full
// precision. Values are clamped into `clamp` when given, and clamp events
// are counted.
ExportResult export_attribute_vectors(const SyntheticBatch& batch, const std::string& path,
                                      const std::vector<std::string>& feature_names,
                                      const std::vector<std::string>& label_names,
                                      const std::optional<ClampRange>& clamp);

// Batch (de)serialization used by the CLI; full provenance, bit-exact
// feature round-trip.
void save_batch(const SyntheticBatch& batch, const std::string& path,
                const std::vector<std::string>& feature_names,
                const std::vector<std::string>& label_names);
SyntheticBatch load_batch(const std::string& path, const std::vector<std::string>& feature_names,
                          const std::vector<std::string>& label_names);

} // namespace ficaug
