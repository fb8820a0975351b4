#include "ficaug/purity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "ficaug/errors.hpp"
#include "ficaug/rng.hpp"

namespace ficaug {

namespace {

std::map<int, std::vector<std::size_t>> members_by_label(const ClusterView& c) {
    std::map<int, std::vector<std::size_t>> by_label;
    for (std::size_t i = 0; i < c.labels.size(); ++i)
        by_label[c.labels[i]].push_back(i);
    return by_label;
}

} // namespace

ClusterView make_cluster_view(const FeatureDataset& ds, const std::vector<int>& ids) {
    if (ids.empty())
        throw ShapeError("cluster view must be non-empty");
    ClusterView v;
    v.member_ids = ids;
    for (int id : ids) {
        v.points.push_back(ds.samples[static_cast<std::size_t>(id)].features);
        v.labels.push_back(ds.samples[static_cast<std::size_t>(id)].label);
    }
    v.centroid = mean_point(v.points);
    return v;
}

double intra_cohesion(const ClusterView& c) {
    if (c.points.empty())
        throw ShapeError("intra_cohesion of empty cluster");
    double total = 0.0;
    for (const auto& [label, members] : members_by_label(c)) {
        const std::size_t nl = members.size();
        if (nl < 2)
            continue; // a single point has no intra-class spread
        double sum = 0.0;
        for (std::size_t i = 0; i < nl; ++i)
            for (std::size_t k = 0; k < nl; ++k)
                if (i != k)
                    sum += euclid(c.points[members[i]], c.points[members[k]]);
        total += sum / (static_cast<double>(nl) * static_cast<double>(nl - 1));
    }
    return total;
}

double inter_separation(const ClusterView& c) {
    auto by_label = members_by_label(c);
    if (by_label.size() < 2)
        throw StateError("inter_separation is not applicable to a single-label cluster");
    double total = 0.0;
    for (auto it = by_label.begin(); it != by_label.end(); ++it) {
        auto jt = it;
        for (++jt; jt != by_label.end(); ++jt) {
            double sum = 0.0;
            for (std::size_t a : it->second)
                for (std::size_t b : jt->second)
                    sum += euclid(c.points[a], c.points[b]);
            total += sum / (static_cast<double>(it->second.size()) *
                            static_cast<double>(jt->second.size()));
        }
    }
    return total;
}

Flagged csm(const ClusterView& c) {
    double intra = intra_cohesion(c);
    double inter = inter_separation(c);
    if (intra == 0.0 && inter > 0.0)
        return {ScoreKind::PerfectlySeparated, 0.0};
    if (intra == 0.0)
        return {ScoreKind::Degenerate, 0.0};
    return {ScoreKind::Finite, inter / intra};
}

double label_entropy(const ClusterView& c) {
    if (c.labels.empty())
        throw ShapeError("entropy of empty cluster");
    std::map<int, std::size_t> counts;
    for (int l : c.labels)
        ++counts[l];
    const double n = static_cast<double>(c.labels.size());
    double h = 0.0;
    for (const auto& [label, count] : counts) {
        double p = static_cast<double>(count) / n;
        h -= p * std::log2(p);
    }
    return h;
}

Flagged separation_criterion(const ClusterScore& score) {
    if (score.kind == ScoreKind::Pure)
        throw StateError("separation criterion is undefined for a pure cluster");
    if (score.kind != ScoreKind::Finite)
        return {score.kind, 0.0};
    return {ScoreKind::Finite, score.csm / score.entropy};
}

double normalize_criterion(const Flagged& raw) {
    switch (raw.kind) {
    case ScoreKind::PerfectlySeparated:
        return 1.0;
    case ScoreKind::Degenerate:
        return 0.0;
    case ScoreKind::Finite:
        return raw.value / (1.0 + raw.value);
    case ScoreKind::Pure:
        throw StateError("cannot normalize the criterion of a pure cluster");
    }
    return 0.0;
}

std::vector<double> normalize_criteria(const std::vector<Flagged>& raw) {
    std::vector<double> out;
    out.reserve(raw.size());
    for (const Flagged& r : raw)
        out.push_back(normalize_criterion(r));
    return out;
}

ClusterScore score_cluster(const ClusterView& c) {
    ClusterScore s;
    s.entropy = label_entropy(c);
    std::set<int> distinct(c.labels.begin(), c.labels.end());
    if (distinct.size() < 2) {
        s.kind = ScoreKind::Pure;
        return s;
    }
    s.intra = intra_cohesion(c);
    s.inter = inter_separation(c);
    Flagged ratio = csm(c);
    s.kind = ratio.kind;
    if (ratio.kind == ScoreKind::Finite) {
        s.csm = ratio.value;
        Flagged crit = separation_criterion(s);
        s.criterion_raw = crit.value;
        s.criterion_norm = normalize_criterion(crit);
    } else {
        s.criterion_norm = normalize_criterion(ratio);
    }
    return s;
}

namespace {

struct RefineState {
    const FeatureDataset& ds;
    const RefinementConfig& cfg;
    RefinementTree tree;
};

void refine_node(RefineState& st, int node_idx) {
    RefinementTree::Node& node = st.tree.nodes[static_cast<std::size_t>(node_idx)];
    node.score = score_cluster(node.view);
    if (node.score.kind == ScoreKind::Pure) {
        node.status = NodeStatus::PureLeaf;
        return;
    }

    const int n_classes = st.ds.n_labels();
    const bool can_split = node.depth < st.cfg.max_depth &&
                           node.view.member_ids.size() >= static_cast<std::size_t>(n_classes) &&
                           node.score.kind == ScoreKind::Finite;
    // A high criterion means the classes sit apart inside this cluster, so
    // re-clustering can pull them into their own groups; a low one means
    // they are intermixed and the cluster is dropped. Flagged clusters are
    // never split.
    if (!can_split || node.score.criterion_norm < st.cfg.threshold) {
        node.status = NodeStatus::MixedDiscarded;
        return;
    }

    node.status = NodeStatus::Split;
    KMeansConfig kcfg = st.cfg.kmeans;
    kcfg.k = n_classes;
    kcfg.seed = derive_seed(st.cfg.kmeans.seed, node.path);
    KMeansResult km = kmeans_fit(node.view.points, kcfg);

    const std::string parent_path = node.path;
    const int parent_depth = node.depth;
    std::vector<std::vector<int>> child_members(static_cast<std::size_t>(n_classes));
    for (std::size_t i = 0; i < node.view.member_ids.size(); ++i)
        child_members[static_cast<std::size_t>(km.assignment[i])].push_back(
            node.view.member_ids[i]);

    for (int c = 0; c < n_classes; ++c) {
        const auto& members = child_members[static_cast<std::size_t>(c)];
        if (members.empty())
            continue; // cannot happen after repair, but stay safe
        RefinementTree::Node child;
        child.view = make_cluster_view(st.ds, members);
        child.depth = parent_depth + 1;
        child.parent = node_idx;
        child.path = parent_path + "." + std::to_string(c);
        int child_idx = static_cast<int>(st.tree.nodes.size());
        st.tree.nodes.push_back(std::move(child));
        st.tree.nodes[static_cast<std::size_t>(node_idx)].children.push_back(child_idx);
        refine_node(st, child_idx);
    }
}

} // namespace

RefinementTree refine_clusters(const FeatureDataset& ds, const RefinementConfig& cfg) {
    const int n_classes = ds.n_labels();
    if (cfg.kmeans.k <= n_classes)
        throw ConfigError("root k must be greater than the number of classes (k=" +
                          std::to_string(cfg.kmeans.k) + ", classes=" +
                          std::to_string(n_classes) + ")");
    if (cfg.threshold < 0.0 || cfg.threshold > 1.0)
        throw ConfigError("threshold must lie in [0, 1]");
    if (cfg.max_depth < 1)
        throw ConfigError("max_depth must be positive");

    RefineState st{ds, cfg, {}};
    std::vector<int> all_ids(ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i)
        all_ids[i] = static_cast<int>(i);

    KMeansResult km = kmeans_fit(ds.feature_rows(), cfg.kmeans);
    std::vector<std::vector<int>> members(static_cast<std::size_t>(cfg.kmeans.k));
    for (std::size_t i = 0; i < ds.size(); ++i)
        members[static_cast<std::size_t>(km.assignment[i])].push_back(static_cast<int>(i));

    for (int c = 0; c < cfg.kmeans.k; ++c) {
        const auto& ids = members[static_cast<std::size_t>(c)];
        if (ids.empty())
            continue;
        RefinementTree::Node root;
        root.view = make_cluster_view(ds, ids);
        root.depth = 1;
        root.parent = -1;
        root.path = "c" + std::to_string(c);
        int idx = static_cast<int>(st.tree.nodes.size());
        st.tree.nodes.push_back(std::move(root));
        st.tree.roots.push_back(idx);
        refine_node(st, idx);
    }
    return st.tree;
}

std::vector<int> RefinementTree::pure_leaves() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].status == NodeStatus::PureLeaf)
            out.push_back(static_cast<int>(i));
    return out;
}

std::vector<int> RefinementTree::discarded_leaves() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].status == NodeStatus::MixedDiscarded)
            out.push_back(static_cast<int>(i));
    return out;
}

std::vector<PureCluster> collect_pure_clusters(const RefinementTree& tree) {
    std::vector<PureCluster> out;
    for (int idx : tree.pure_leaves()) {
        const auto& node = tree.nodes[static_cast<std::size_t>(idx)];
        PureCluster pc;
        pc.view = node.view;
        pc.node_index = idx;
        pc.parent_index = node.parent;
        pc.path = node.path;
        pc.label = node.view.labels.front();
        out.push_back(std::move(pc));
    }
    return out;
}

std::string tree_report(const RefinementTree& tree, const FeatureDataset& ds) {
    std::ostringstream out;
    out << "path\tstatus\tdepth\tsize\tlabels\tintra\tinter\tcsm\tentropy\tcriterion_raw\tcriterion_norm\n";
    for (const auto& node : tree.nodes) {
        const char* status = node.status == NodeStatus::PureLeaf      ? "pure-leaf"
                             : node.status == NodeStatus::MixedDiscarded ? "mixed-discarded"
                                                                         : "split";
        std::map<int, int> hist;
        for (int l : node.view.labels)
            ++hist[l];
        std::ostringstream labels;
        bool first = true;
        for (const auto& [l, n] : hist) {
            if (!first)
                labels << ' ';
            labels << ds.label_names[static_cast<std::size_t>(l)] << ':' << n;
            first = false;
        }
        char nums[256];
        switch (node.score.kind) {
        case ScoreKind::Pure:
            std::snprintf(nums, sizeof(nums), "-\t-\t-\t%.6g\t-\t-", node.score.entropy);
            break;
        case ScoreKind::PerfectlySeparated:
            std::snprintf(nums, sizeof(nums), "%.6g\t%.6g\tperfect\t%.6g\tperfect\t1",
                          node.score.intra, node.score.inter, node.score.entropy);
            break;
        case ScoreKind::Degenerate:
            std::snprintf(nums, sizeof(nums), "%.6g\t%.6g\tdegenerate\t%.6g\tdegenerate\t0",
                          node.score.intra, node.score.inter, node.score.entropy);
            break;
        case ScoreKind::Finite:
            std::snprintf(nums, sizeof(nums), "%.6g\t%.6g\t%.6g\t%.6g\t%.6g\t%.6g",
                          node.score.intra, node.score.inter, node.score.csm,
                          node.score.entropy, node.score.criterion_raw,
                          node.score.criterion_norm);
            break;
        }
        out << node.path << '\t' << status << '\t' << node.depth << '\t'
            << node.view.member_ids.size() << '\t' << labels.str() << '\t' << nums << '\n';
    }
    return out.str();
}

} // namespace ficaug
