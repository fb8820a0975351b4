#pragma once

#include <string>
#include <vector>

#include "ficaug/dataset.hpp"
#include "ficaug/kmeans.hpp"

namespace ficaug {

/// One cluster's members, label slice, and centroid.
struct ClusterView {
    std::vector<int> member_ids; // indices into the owning dataset
    Rows points;
    std::vector<int> labels;
    Vec centroid; // mean of points
};

ClusterView make_cluster_view(const FeatureDataset& ds, const std::vector<int>& ids);

// How a cluster's separation value is to be read. Pure clusters carry no
// separation numbers at all; the two flag kinds replace a number when the
// intra-class cohesion is zero.
enum class ScoreKind {
    Pure,               // single label, never scored
    Finite,             // ordinary numeric CSM / criterion
    PerfectlySeparated, // intra = 0, inter > 0; normalized criterion 1.0
    Degenerate          // intra = 0, inter = 0; normalized criterion 0.0
};

struct Flagged {
    ScoreKind kind = ScoreKind::Finite;
    double value = 0.0; // meaningful only when kind == Finite
};

struct ClusterScore {
    ScoreKind kind = ScoreKind::Pure;
    double intra = 0.0;
    double inter = 0.0;
    double csm = 0.0;
    double entropy = 0.0; // bits; 0 iff pure
    double criterion_raw = 0.0;
    double criterion_norm = 0.0; // in [0,1]; flags map to the endpoints
};

// Per-label mean pairwise distance, summed over the labels present.
// Labels with a single member contribute 0.
double intra_cohesion(const ClusterView& c);

// Mean cross-label pairwise distance, summed over unordered label pairs.
// Requires at least two labels.
double inter_separation(const ClusterView& c);

// Ratio of inter-class separation to intra-class cohesion. Zero cohesion
// with positive separation flags the cluster perfectly separated; zero on
// both sides is degenerate.
Flagged csm(const ClusterView& c);

// Shannon entropy of the label distribution, in bits.
double label_entropy(const ClusterView& c);

// CSM divided by entropy; flags propagate. Must not be called on a pure
// cluster (entropy 0).
Flagged separation_criterion(const ClusterScore& score);

// Bounded, monotone, dataset-independent map x -> x/(1+x). The flag kinds
// map to the exact endpoints 1.0 and 0.0, so threshold semantics are
// comparable across refinement passes.
double normalize_criterion(const Flagged& raw);
std::vector<double> normalize_criteria(const std::vector<Flagged>& raw);

// Full score for one cluster.
ClusterScore score_cluster(const ClusterView& c);

enum class NodeStatus { PureLeaf, MixedDiscarded, Split };

/// Hierarchy produced by recursive refinement. Leaves are pure or
/// mixed-discarded; children of a split node partition its members.
struct RefinementTree {
    struct Node {
        ClusterView view;
        ClusterScore score;
        NodeStatus status = NodeStatus::MixedDiscarded;
        int depth = 1; // root clusters are depth 1
        int parent = -1;
        std::string path; // "c2", "c2.0", ...
        std::vector<int> children;
    };
    std::vector<Node> nodes; // parent-first (preorder) construction order
    std::vector<int> roots;

    std::vector<int> pure_leaves() const;
    std::vector<int> discarded_leaves() const;
};

struct RefinementConfig {
    double threshold = 0.5; // on the normalized criterion
    int max_depth = 8;
    KMeansConfig kmeans; // root pass; children reuse it with k = n_classes
};

// Cluster the dataset with cfg.kmeans.k (which must exceed the class
// count), score every cluster, and recursively re-cluster the mixed ones
// whose normalized criterion reaches the threshold, with k set to the
// number of classes. Mixed clusters below the threshold, flagged clusters,
// and clusters that cannot legally split (too small or too deep) are
// discarded. Child k-means seeds derive from (root seed, node path).
RefinementTree refine_clusters(const FeatureDataset& ds, const RefinementConfig& cfg);

// The pure-leaf views, in tree construction order, with their parent node
// index alongside (or -1 when the parent is the root pass itself).
struct PureCluster {
    ClusterView view;
    int node_index = -1;
    int parent_index = -1;
    std::string path;
    int label = 0;
};
std::vector<PureCluster> collect_pure_clusters(const RefinementTree& tree);

// One node per line: path, status, depth, size, label histogram, scores.
std::string tree_report(const RefinementTree& tree, const FeatureDataset& ds);

} // namespace ficaug
