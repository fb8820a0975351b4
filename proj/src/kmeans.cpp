#include "ficaug/kmeans.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "ficaug/errors.hpp"
#include "ficaug/rng.hpp"

namespace ficaug {

namespace {

double total_inertia(const Rows& points, const std::vector<int>& assignment,
                     const Rows& centroids) {
    double s = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i)
        s += sq_dist(points[i], centroids[static_cast<std::size_t>(assignment[i])]);
    return s;
}

// Move the point farthest from its centroid into each empty cluster. The
// donor cluster must keep at least one member. Ties go to the lowest point
// index.
void repair_empty_clusters(const Rows& points, std::vector<int>& assignment,
                           Rows& centroids) {
    const int k = static_cast<int>(centroids.size());
    for (int pass = 0; pass < k; ++pass) {
        std::vector<int> sizes(static_cast<std::size_t>(k), 0);
        for (int a : assignment)
            ++sizes[static_cast<std::size_t>(a)];
        int empty = -1;
        for (int j = 0; j < k; ++j)
            if (sizes[static_cast<std::size_t>(j)] == 0) {
                empty = j;
                break;
            }
        if (empty < 0)
            return;
        int best = -1;
        double best_d = -1.0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (sizes[static_cast<std::size_t>(assignment[i])] < 2)
                continue;
            double d = sq_dist(points[i], centroids[static_cast<std::size_t>(assignment[i])]);
            if (d > best_d) {
                best_d = d;
                best = static_cast<int>(i);
            }
        }
        if (best < 0)
            return;
        assignment[static_cast<std::size_t>(best)] = empty;
        centroids[static_cast<std::size_t>(empty)] = points[static_cast<std::size_t>(best)];
    }
}

Rows recompute_centroids(const Rows& points, const std::vector<int>& assignment, int k) {
    const std::size_t d = points.front().size();
    Rows cents(static_cast<std::size_t>(k), Vec(d, 0.0));
    std::vector<int> sizes(static_cast<std::size_t>(k), 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto c = static_cast<std::size_t>(assignment[i]);
        ++sizes[c];
        for (std::size_t j = 0; j < d; ++j)
            cents[c][j] += points[i][j];
    }
    for (int j = 0; j < k; ++j)
        if (sizes[static_cast<std::size_t>(j)] > 0)
            for (double& v : cents[static_cast<std::size_t>(j)])
                v /= sizes[static_cast<std::size_t>(j)];
    return cents;
}

Rows seed_plus_plus(const Rows& points, int k, Rng& rng) {
    const std::size_t n = points.size();
    Rows cents;
    cents.push_back(points[rng.below(n)]);
    Vec d2(n);
    for (std::size_t i = 0; i < n; ++i)
        d2[i] = sq_dist(points[i], cents[0]);
    while (static_cast<int>(cents.size()) < k) {
        double total = 0.0;
        for (double v : d2)
            total += v;
        std::size_t pick = 0;
        if (total <= 0.0) {
            // all remaining mass on already-chosen locations; fall back to
            // the first point, duplicates get repaired during Lloyd
            pick = rng.below(n);
        } else {
            double r = rng.uniform01() * total;
            double cum = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                cum += d2[i];
                if (r < cum || i + 1 == n) {
                    pick = i;
                    break;
                }
            }
        }
        cents.push_back(points[pick]);
        for (std::size_t i = 0; i < n; ++i)
            d2[i] = std::min(d2[i], sq_dist(points[i], cents.back()));
    }
    return cents;
}

KMeansResult lloyd(const Rows& points, Rows centroids, const KMeansConfig& cfg) {
    KMeansResult res;
    std::vector<int> assignment;
    for (int it = 1; it <= cfg.max_iters; ++it) {
        assignment = assign(points, centroids);
        repair_empty_clusters(points, assignment, centroids);
        Rows updated = recompute_centroids(points, assignment, cfg.k);
        double shift = 0.0;
        for (std::size_t j = 0; j < centroids.size(); ++j)
            shift = std::max(shift, euclid(centroids[j], updated[j]));
        centroids = std::move(updated);
        res.iterations = it;
        res.inertia_trace.push_back(total_inertia(points, assignment, centroids));
        if (shift <= cfg.tol) {
            res.converged = true;
            break;
        }
    }
    // Restore the nearest-centroid invariant against the final centroids.
    assignment = assign(points, centroids);
    repair_empty_clusters(points, assignment, centroids);
    res.assignment = std::move(assignment);
    res.centroids = std::move(centroids);
    res.inertia = total_inertia(points, res.assignment, res.centroids);
    return res;
}

} // namespace

std::vector<int> assign(const Rows& points, const Rows& centroids) {
    std::vector<int> out(points.size(), 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        int best_j = 0;
        for (std::size_t j = 0; j < centroids.size(); ++j) {
            double d = sq_dist(points[i], centroids[j]);
            if (d < best) {
                best = d;
                best_j = static_cast<int>(j);
            }
        }
        out[i] = best_j;
    }
    return out;
}

KMeansResult kmeans_fit(const Rows& points, const KMeansConfig& cfg) {
    if (cfg.k < 1)
        throw ArgumentError("k must be positive");
    if (cfg.tol < 0.0)
        throw ArgumentError("tol must be non-negative");
    if (points.size() < static_cast<std::size_t>(cfg.k))
        throw InfeasibleError("k-means infeasible: " + std::to_string(points.size()) +
                              " points for k=" + std::to_string(cfg.k));

    KMeansResult best;
    bool have = false;
    for (int init = 0; init < std::max(1, cfg.n_init); ++init) {
        Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(init)));
        KMeansResult r = lloyd(points, seed_plus_plus(points, cfg.k, rng), cfg);
        if (!have || r.inertia < best.inertia) {
            best = std::move(r);
            have = true;
        }
    }
    return best;
}

std::vector<std::pair<int, double>> sweep_k(const Rows& points, int k_lo, int k_hi,
                                            const KMeansConfig& base) {
    if (k_lo > k_hi)
        throw ArgumentError("empty k range");
    if (k_lo < 1 || static_cast<std::size_t>(k_hi) > points.size())
        throw ArgumentError("k range must lie within [1, n]");

    std::vector<std::pair<int, double>> curve;
    KMeansResult prev;
    bool have_prev = false;
    for (int k = k_lo; k <= k_hi; ++k) {
        KMeansConfig cfg = base;
        cfg.k = k;
        cfg.seed = derive_seed(base.seed, "sweep-k-" + std::to_string(k));
        KMeansResult r = kmeans_fit(points, cfg);
        if (have_prev && static_cast<int>(prev.centroids.size()) == k - 1) {
            // grow the previous solution by the point farthest from its
            // centroid and polish; guarantees a non-increasing curve
            Rows seeded = prev.centroids;
            int far = 0;
            double far_d = -1.0;
            for (std::size_t i = 0; i < points.size(); ++i) {
                double d = sq_dist(points[i],
                                   prev.centroids[static_cast<std::size_t>(prev.assignment[i])]);
                if (d > far_d) {
                    far_d = d;
                    far = static_cast<int>(i);
                }
            }
            seeded.push_back(points[static_cast<std::size_t>(far)]);
            KMeansResult warm = lloyd(points, std::move(seeded), cfg);
            if (warm.inertia < r.inertia)
                r = std::move(warm);
        }
        curve.emplace_back(k, r.inertia);
        prev = std::move(r);
        have_prev = true;
    }
    return curve;
}

} // namespace ficaug
