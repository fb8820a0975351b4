#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ficaug/vecmath.hpp"

namespace ficaug {

struct KMeansConfig {
    int k = 2;
    int max_iters = 300;
    double tol = 1e-6; // max centroid shift that counts as converged
    std::uint64_t seed = 0;
    int n_init = 10; // restarts, best inertia wins
};

struct KMeansResult {
    Rows centroids;
    std::vector<int> assignment;
    double inertia = 0.0; // sum of squared distances to assigned centroids
    int iterations = 0;
    bool converged = false;
    // inertia after each Lloyd iteration (assign + repair + update);
    // non-increasing by construction
    std::vector<double> inertia_trace;
};

// Lloyd's algorithm with distance-weighted (k-means++ style) seeding.
// Returns the best of cfg.n_init restarts. Empty clusters are repaired by
// reseeding with the point farthest from its centroid, so the result never
// contains an empty cluster. Deterministic for a given (points, cfg).
KMeansResult kmeans_fit(const Rows& points, const KMeansConfig& cfg);

// Nearest-centroid assignment; distance ties go to the lowest centroid index.
std::vector<int> assign(const Rows& points, const Rows& centroids);

// Inertia per k over [k_lo, k_hi] for elbow inspection. Each k gets an
// independent seeded fit plus a warm-start candidate grown from the previous
// k's best solution, which keeps the curve non-increasing.
std::vector<std::pair<int, double>> sweep_k(const Rows& points, int k_lo, int k_hi,
                                            const KMeansConfig& base);

} // namespace ficaug
