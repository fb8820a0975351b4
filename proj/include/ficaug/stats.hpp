#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ficaug/dataset.hpp"
#include "ficaug/sampler.hpp"

namespace ficaug {

// Two-sided Welch t-test p-value (unequal variances, Welch-Satterthwaite
// degrees of freedom). Both samples constant: p = 1 when equal, 0 when not.
double t_test(const Vec& a, const Vec& b);

// Mean-centered Levene test of equal variances; p from the F distribution.
double levene_test(const Vec& a, const Vec& b);

// Two-sample Kolmogorov-Smirnov D statistic.
double ks_statistic(const Vec& a, const Vec& b);

// KS p-value from the asymptotic Kolmogorov distribution with effective
// sample size n_a*n_b/(n_a+n_b).
double ks_test(const Vec& a, const Vec& b);

/// Per-(feature, class) real-vs-synthetic comparison table.
struct TestReport {
    struct Row {
        std::string feature;
        std::string label;
        double p_t = 0.0;
        double p_levene = 0.0;
        double p_ks = 0.0;
    };
    std::vector<Row> rows; // feature-major, class-minor
    int n_per_side = 0;
    // fraction of rows with p > 0.05, per test and across all cells
    double pass_t = 0.0;
    double pass_levene = 0.0;
    double pass_ks = 0.0;
    double pass_fraction = 0.0;
};

// Draws n_per_side samples per class from each side (same seeded
// permutation on both sides, so identical datasets compare as identical)
// and runs all three tests per feature and class.
TestReport similarity_report(const FeatureDataset& real, const SyntheticBatch& synth,
                             int n_per_side, std::uint64_t seed);

std::string render_report(const TestReport& report);

} // namespace ficaug
