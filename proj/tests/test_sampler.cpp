#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "ficaug/errors.hpp"
#include "ficaug/sampler.hpp"
#include "support/fixtures.hpp"

using namespace ficaug;

namespace {

ClusterView cluster_of(const Rows& pts, int label) {
    ClusterView v;
    v.points = pts;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        v.member_ids.push_back(static_cast<int>(i));
        v.labels.push_back(label);
    }
    v.centroid = mean_point(pts);
    return v;
}

} // namespace

TEST_CASE("radius unit fixtures") {
    AugmentConfig cfg;
    // singleton: 1% of the mean parent feature std
    ClusterView solo = cluster_of({{3.0, 3.0, 3.0}}, 0);
    CHECK(cluster_radius(solo, {1.0, 2.0, 3.0}, cfg) == doctest::Approx(0.02).epsilon(1e-12));

    // equal distances, zero range
    ClusterView pair = cluster_of({{0.0, 0.0}, {3.0, 0.0}}, 0);
    CHECK(cluster_radius(pair, {1.0, 1.0}, cfg) == doctest::Approx(1.5).epsilon(1e-12));

    // distances {3,1,1,3}: max 3 plus 10% of range 2
    ClusterView spread = cluster_of({{0.0}, {2.0}, {4.0}, {6.0}}, 0);
    CHECK(cluster_radius(spread, {1.0}, cfg) == doctest::Approx(3.2).epsilon(1e-12));
}

TEST_CASE("coincident clusters fall back to the singleton radius") {
    AugmentConfig cfg;
    ClusterView flat = cluster_of({{2.0, 2.0}, {2.0, 2.0}, {2.0, 2.0}}, 0);
    CHECK(cluster_radius(flat, {2.0, 4.0}, cfg) == doctest::Approx(0.03));
    CHECK_THROWS_AS(cluster_radius(flat, {0.0, 0.0}, cfg), DegenerateGeometryError);
}

TEST_CASE("covariance from radius") {
    Vec sigma = covariance_from_radius(3.0, 2);
    CHECK(sigma == Vec{1.0, 1.0});
    Vec tiny = covariance_from_radius(0.02, 15);
    CHECK(tiny.size() == 15);
    CHECK(tiny[0] == doctest::Approx(4.4444444444e-5).epsilon(1e-9));
    // quadratic in the radius
    CHECK(covariance_from_radius(6.0, 1)[0] == doctest::Approx(4.0 * sigma[0]));
}

TEST_CASE("synthetic budget rounding") {
    CHECK(synthetic_budget(4, 3.0) == 12);
    CHECK(synthetic_budget(3, 0.1) == 1); // floor guard
    CHECK(synthetic_budget(2, 2.5) == 5);
    // round half to even
    CHECK(synthetic_budget(1, 1.5) == 2);
    CHECK(synthetic_budget(1, 2.5) == 2);
    CHECK(synthetic_budget(1, 0.5) == 1); // rounds to 0, floor guard
    CHECK_THROWS_AS(synthetic_budget(0, 1.0), ArgumentError);
}

TEST_CASE("sampling is deterministic and well-centered") {
    ClusterGeometry geo;
    geo.mu = {5.0, 5.0};
    geo.radius = 3.0;
    geo.sigma_diag = covariance_from_radius(geo.radius, 2);
    geo.source_label = 1;
    geo.source_size = 10;

    SyntheticBatch a = sample_synthetic(geo, 1000, 42, "c0");
    SyntheticBatch b = sample_synthetic(geo, 1000, 42, "c0");
    REQUIRE(a.size() == 1000);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a.points[i] == b.points[i]);
        CHECK(a.labels[i] == 1);
    }

    // empirical mean within 3*sigma/sqrt(q) per coordinate
    const double bound = 3.0 * 1.0 / std::sqrt(1000.0) * 1.5;
    for (int j = 0; j < 2; ++j) {
        double m = 0.0;
        for (const Vec& p : a.points)
            m += p[static_cast<std::size_t>(j)];
        m /= static_cast<double>(a.size());
        CHECK(std::fabs(m - 5.0) < bound);
    }

    // empirical variance within 10% of (r/3)^2 at q=10000
    SyntheticBatch big = sample_synthetic(geo, 10000, 7, "c0");
    for (int j = 0; j < 2; ++j) {
        Vec col;
        for (const Vec& p : big.points)
            col.push_back(p[static_cast<std::size_t>(j)]);
        double sd = population_std(col);
        CHECK(sd * sd == doctest::Approx(1.0).epsilon(0.10));
    }
}

TEST_CASE("augment budget arithmetic over pure leaves") {
    // two single-class blobs far apart with sizes 4 and 8; every pure leaf
    // budget is exactly 2n, so the batch totals 24 regardless of the split
    FeatureDataset ds;
    ds.feature_names = {"f0", "f1"};
    ds.label_names = {"a", "b"};
    Rng rng(3);
    for (int i = 0; i < 4; ++i) {
        Sample s;
        s.label = 0;
        s.features = {rng.normal() * 0.1, rng.normal() * 0.1};
        ds.samples.push_back(s);
    }
    for (int i = 0; i < 8; ++i) {
        Sample s;
        s.label = 1;
        s.features = {100.0 + rng.normal() * 0.1, rng.normal() * 0.1};
        ds.samples.push_back(s);
    }
    RefinementConfig rcfg;
    rcfg.kmeans.k = 3;
    rcfg.kmeans.seed = 1;
    AugmentConfig acfg;
    acfg.alpha = 2.0;
    acfg.seed = 10;
    auto [batch, tree] = augment_dataset(ds, rcfg, acfg);
    CHECK(batch.size() == 24);

    // label purity and pure-leaf provenance
    std::map<std::string, int> node_label;
    std::map<std::string, NodeStatus> node_status;
    for (const auto& node : tree.nodes) {
        node_status[node.path] = node.status;
        node_label[node.path] = node.view.labels.front();
    }
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const std::string& path = batch.provenance[i].first;
        REQUIRE(node_status.count(path) == 1);
        CHECK(node_status[path] == NodeStatus::PureLeaf);
        CHECK(batch.labels[i] == node_label[path]);
    }
}

TEST_CASE("alpha one preserves class proportions on the blob fixture") {
    FeatureDataset ds = fixtures::make_blobs(20, 3, 10.0, 17);
    RefinementConfig rcfg;
    rcfg.kmeans.k = 3;
    rcfg.kmeans.seed = 4;
    AugmentConfig acfg;
    acfg.alpha = 1.0;
    acfg.seed = 11;
    auto [batch, tree] = augment_dataset(ds, rcfg, acfg);
    CHECK(batch.size() == ds.size());
    int per_class[2] = {0, 0};
    for (int l : batch.labels)
        ++per_class[l];
    CHECK(per_class[0] == doctest::Approx(20).epsilon(0.15));
    CHECK(per_class[1] == doctest::Approx(20).epsilon(0.15));
}

TEST_CASE("all-mixed roots at threshold one yield an empty batch") {
    // both labels at each of six locations: every cluster stays mixed
    FeatureDataset ds;
    ds.feature_names = {"f0", "f1"};
    ds.label_names = {"a", "b"};
    for (int i = 0; i < 6; ++i) {
        for (int c = 0; c < 2; ++c) {
            Sample s;
            s.label = c;
            s.features = {static_cast<double>(i * 10), static_cast<double>((i % 2) * 10)};
            ds.samples.push_back(s);
        }
    }
    RefinementConfig rcfg;
    rcfg.kmeans.k = 3;
    rcfg.threshold = 1.0;
    AugmentConfig acfg;
    acfg.alpha = 2.0;
    auto [batch, tree] = augment_dataset(ds, rcfg, acfg);
    CHECK(batch.size() == 0);
    CHECK(!batch.warnings.empty());
    for (const auto& node : tree.nodes)
        CHECK(node.status == NodeStatus::MixedDiscarded);
}

TEST_CASE("augmentation is deterministic and translation-equivariant") {
    FeatureDataset ds = fixtures::make_blobs(10, 2, 8.0, 23);
    RefinementConfig rcfg;
    rcfg.kmeans.k = 3;
    rcfg.kmeans.seed = 9;
    AugmentConfig acfg;
    acfg.alpha = 1.5;
    acfg.seed = 77;

    auto [b1, t1] = augment_dataset(ds, rcfg, acfg);
    auto [b2, t2] = augment_dataset(ds, rcfg, acfg);
    REQUIRE(b1.size() == b2.size());
    for (std::size_t i = 0; i < b1.size(); ++i) {
        CHECK(b1.points[i] == b2.points[i]);
        CHECK(b1.provenance[i] == b2.provenance[i]);
    }

    FeatureDataset shifted = ds;
    for (Sample& s : shifted.samples)
        for (double& v : s.features)
            v += 8.0;
    auto [b3, t3] = augment_dataset(shifted, rcfg, acfg);
    REQUIRE(b3.size() == b1.size());
    for (std::size_t i = 0; i < b1.size(); ++i)
        for (std::size_t j = 0; j < b1.points[i].size(); ++j)
            CHECK(b3.points[i][j] == doctest::Approx(b1.points[i][j] + 8.0).epsilon(1e-9));
}

TEST_CASE("gaussian noise baseline") {
    FeatureDataset ds = fixtures::make_blobs(10, 2, 4.0, 2);
    SyntheticBatch b = gaussian_noise_augment(ds, 1e-12, 1.0, 5);
    CHECK(b.size() == ds.size());
    for (std::size_t i = 0; i < b.size(); ++i) {
        CHECK(b.labels[i] == ds.samples[i].label);
        for (std::size_t j = 0; j < 2; ++j)
            CHECK(b.points[i][j] == doctest::Approx(ds.samples[i].features[j]).epsilon(1e-9));
    }
    SyntheticBatch b2 = gaussian_noise_augment(ds, 0.5, 3.0, 5);
    CHECK(b2.size() == 3 * ds.size());
    SyntheticBatch b3 = gaussian_noise_augment(ds, 0.5, 3.0, 5);
    for (std::size_t i = 0; i < b2.size(); ++i)
        CHECK(b2.points[i] == b3.points[i]);
    CHECK_THROWS_AS(gaussian_noise_augment(ds, 0.0, 1.0, 5), ArgumentError);
}

TEST_CASE("attribute-vector export clamps and counts") {
    SyntheticBatch batch;
    batch.points = {{-0.3, 2.0}, {1.0, 7.5}};
    batch.labels = {0, 1};
    batch.provenance = {{"c0", 0}, {"c1", 0}};
    const std::string path = fixtures::temp_file("ficaug_export.csv");
    ExportResult res = export_attribute_vectors(batch, path, {"f0", "f1"}, {"a", "b"},
                                                ClampRange{0.0, 5.0});
    CHECK(res.records == 2);
    CHECK(res.clamped_values == 2);

    std::ifstream in(path);
    std::string header, row1;
    std::getline(in, header);
    std::getline(in, row1);
    CHECK(header == "id,label,f0,f1");
    CHECK(row1.rfind("c0#0,a,0,", 0) == 0);
}

TEST_CASE("batch save/load round-trips bit-exactly") {
    FeatureDataset ds = fixtures::make_blobs(8, 3, 9.0, 6);
    RefinementConfig rcfg;
    rcfg.kmeans.k = 3;
    AugmentConfig acfg;
    acfg.alpha = 2.0;
    acfg.seed = 19;
    auto [batch, tree] = augment_dataset(ds, rcfg, acfg);
    REQUIRE(batch.size() > 0);

    const std::string path = fixtures::temp_file("ficaug_batch.csv");
    save_batch(batch, path, ds.feature_names, ds.label_names);
    SyntheticBatch back = load_batch(path, ds.feature_names, ds.label_names);
    REQUIRE(back.size() == batch.size());
    CHECK(back.seed == batch.seed);
    CHECK(back.alpha == batch.alpha);
    for (std::size_t i = 0; i < batch.size(); ++i) {
        CHECK(back.points[i] == batch.points[i]);
        CHECK(back.labels[i] == batch.labels[i]);
        CHECK(back.provenance[i] == batch.provenance[i]);
    }
}
