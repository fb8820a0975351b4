#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "ficaug/dataset.hpp"
#include "ficaug/purity.hpp"
#include "ficaug/rng.hpp"

namespace fixtures {

// Two Gaussian classes with the given Euclidean distance between their
// means (spread evenly over the coordinates), unit per-coordinate std.
inline ficaug::FeatureDataset make_blobs(int n_per_class, int dim, double gap,
                                         std::uint64_t seed, double sigma = 1.0) {
    ficaug::FeatureDataset ds;
    for (int j = 0; j < dim; ++j)
        ds.feature_names.push_back("f" + std::to_string(j));
    ds.label_names = {"a", "b"};
    ficaug::Rng rng(seed);
    const double shift = gap / std::sqrt(static_cast<double>(dim));
    for (int c = 0; c < 2; ++c) {
        for (int i = 0; i < n_per_class; ++i) {
            ficaug::Sample s;
            s.label = c;
            for (int j = 0; j < dim; ++j)
                s.features.push_back(c * shift + sigma * rng.normal());
            ds.samples.push_back(std::move(s));
        }
    }
    return ds;
}

inline std::string temp_file(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

// ------------------------------------------------------------------
// Independent brute-force oracles for the cluster scores. Written as plain
// double loops over all point pairs, deliberately not sharing code with the
// library.

inline double oracle_intra(const ficaug::ClusterView& c) {
    std::map<int, double> sums;
    std::map<int, int> counts;
    for (int l : c.labels)
        ++counts[l];
    for (std::size_t i = 0; i < c.points.size(); ++i)
        for (std::size_t k = 0; k < c.points.size(); ++k) {
            if (i == k || c.labels[i] != c.labels[k])
                continue;
            sums[c.labels[i]] += ficaug::euclid(c.points[i], c.points[k]);
        }
    double total = 0.0;
    for (const auto& [label, sum] : sums) {
        const double nl = counts[label];
        total += sum / (nl * (nl - 1.0));
    }
    return total;
}

inline double oracle_inter(const ficaug::ClusterView& c) {
    std::map<int, int> counts;
    for (int l : c.labels)
        ++counts[l];
    std::map<std::pair<int, int>, double> sums;
    for (std::size_t i = 0; i < c.points.size(); ++i)
        for (std::size_t k = 0; k < c.points.size(); ++k) {
            if (c.labels[i] >= c.labels[k])
                continue;
            sums[{c.labels[i], c.labels[k]}] += ficaug::euclid(c.points[i], c.points[k]);
        }
    double total = 0.0;
    for (const auto& [pair, sum] : sums)
        total += sum / (static_cast<double>(counts[pair.first]) *
                        static_cast<double>(counts[pair.second]));
    return total;
}

inline double oracle_entropy(const ficaug::ClusterView& c) {
    std::map<int, int> counts;
    for (int l : c.labels)
        ++counts[l];
    double h = 0.0;
    for (const auto& [label, n] : counts) {
        double p = static_cast<double>(n) / static_cast<double>(c.labels.size());
        h -= p * std::log2(p);
    }
    return h;
}

// ------------------------------------------------------------------
// Exhaustive k-means oracle: the minimum inertia over every assignment of
// n points to k non-empty clusters, centroid = cluster mean. Only usable
// for tiny n.

inline double oracle_kmeans_optimum(const ficaug::Rows& pts, int k) {
    const std::size_t n = pts.size();
    const std::size_t d = pts.front().size();
    std::vector<int> a(n, 0);
    double best = std::numeric_limits<double>::infinity();
    while (true) {
        std::vector<int> sizes(static_cast<std::size_t>(k), 0);
        for (int x : a)
            ++sizes[static_cast<std::size_t>(x)];
        bool nonempty = true;
        for (int s : sizes)
            nonempty = nonempty && s > 0;
        if (nonempty) {
            ficaug::Rows means(static_cast<std::size_t>(k), ficaug::Vec(d, 0.0));
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < d; ++j)
                    means[static_cast<std::size_t>(a[i])][j] += pts[i][j];
            for (int c = 0; c < k; ++c)
                for (std::size_t j = 0; j < d; ++j)
                    means[static_cast<std::size_t>(c)][j] /= sizes[static_cast<std::size_t>(c)];
            double inertia = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                inertia += ficaug::sq_dist(pts[i], means[static_cast<std::size_t>(a[i])]);
            best = std::min(best, inertia);
        }
        std::size_t pos = 0;
        while (pos < n && a[pos] == k - 1)
            a[pos++] = 0;
        if (pos == n)
            break;
        ++a[pos];
    }
    return best;
}

} // namespace fixtures
