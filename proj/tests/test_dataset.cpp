#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <set>

#include "ficaug/dataset.hpp"
#include "ficaug/errors.hpp"
#include "ficaug/folds.hpp"
#include "support/fixtures.hpp"

using namespace ficaug;

namespace {

std::string small_csv() {
    return "subject,label,f0,f1,f2\n"
           "s1,pd,0.5,1.0,2.0\n"
           "s2,pd,0.6,1.1,2.1\n"
           "s3,ctrl,5.0,6.0,7.0\n"
           "s4,ctrl,5.1,6.1,7.1\n";
}

// one row per subject x view, mirroring a 55-subject 5-view study layout
std::string five_view_csv() {
    std::string out = "subject,view,label,f0,f1\n";
    const char* views[5] = {"anger", "happiness", "disgust", "fear", "surprise"};
    for (int s = 0; s < 55; ++s) {
        const char* label = s < 28 ? "pd" : "ctrl";
        for (int v = 0; v < 5; ++v) {
            char line[128];
            std::snprintf(line, sizeof(line), "subj%02d,%s,%s,%d.5,%d.25\n", s, views[v],
                          label, s, v);
            out += line;
        }
    }
    return out;
}

} // namespace

TEST_CASE("load a small labeled file") {
    const std::string path = fixtures::temp_file("ficaug_small.csv");
    fixtures::write_file(path, small_csv());
    ColumnSchema schema;
    schema.label_col = "label";
    schema.subject_col = "subject";
    FeatureDataset ds = load_dataset(path, schema);
    CHECK(ds.size() == 4);
    CHECK(ds.dim() == 3);
    CHECK(ds.n_labels() == 2);
    // names are sorted, so indices survive row permutations
    CHECK(ds.label_names == std::vector<std::string>{"ctrl", "pd"});
    CHECK(ds.samples[0].label == 1);
    CHECK(ds.samples[2].label == 0);
    CHECK(*ds.samples[0].subject_id == "s1");
    CHECK(ds.samples[0].features == Vec{0.5, 1.0, 2.0});
}

TEST_CASE("blank feature cell names row and column") {
    const std::string path = fixtures::temp_file("ficaug_blank.csv");
    fixtures::write_file(path, "label,f0,f1\npd,1.0,2.0\nctrl,2.0,\n");
    try {
        load_dataset(path, {});
        FAIL("expected IngestionError");
    } catch (const IngestionError& e) {
        const std::string msg = e.what();
        CHECK(msg.find(":3:") != std::string::npos);
        CHECK(msg.find("f1") != std::string::npos);
    }
}

TEST_CASE("missing label column is a schema error") {
    const std::string path = fixtures::temp_file("ficaug_nolabel.csv");
    fixtures::write_file(path, "cls,f0\npd,1.0\nctrl,2.0\n");
    CHECK_THROWS_AS(load_dataset(path, {}), SchemaError);
}

TEST_CASE("single-class file is rejected") {
    const std::string path = fixtures::temp_file("ficaug_oneclass.csv");
    fixtures::write_file(path, "label,f0\npd,1.0\npd,2.0\n");
    CHECK_THROWS_AS(load_dataset(path, {}), DatasetError);
}

TEST_CASE("tab-delimited files are accepted") {
    const std::string path = fixtures::temp_file("ficaug_tabs.tsv");
    fixtures::write_file(path, "label\tf0\tf1\npd\t1.0\t2.0\nctrl\t3.0\t4.0\n");
    FeatureDataset ds = load_dataset(path, {});
    CHECK(ds.size() == 2);
    CHECK(ds.dim() == 2);
    CHECK(ds.samples[0].features == Vec{1.0, 2.0});
}

TEST_CASE("non-numeric columns are skipped in default feature selection") {
    const std::string path = fixtures::temp_file("ficaug_textcol.csv");
    fixtures::write_file(path, "label,notes,f0\npd,hello,1.0\nctrl,world,2.0\n");
    FeatureDataset ds = load_dataset(path, {});
    CHECK(ds.feature_names == std::vector<std::string>{"f0"});
}

TEST_CASE("five-view fixture loads and splits") {
    const std::string path = fixtures::temp_file("ficaug_views.csv");
    fixtures::write_file(path, five_view_csv());
    ColumnSchema schema;
    schema.subject_col = "subject";
    schema.view_col = "view";
    FeatureDataset ds = load_dataset(path, schema);
    CHECK(ds.size() == 275);
    CHECK(ds.view_names.size() == 5);

    std::vector<FeatureDataset> parts = split_by_view(ds);
    REQUIRE(parts.size() == 5);
    std::size_t total = 0;
    for (const FeatureDataset& p : parts) {
        CHECK(p.size() == 55);
        CHECK(p.view_names.size() == 1);
        CHECK(p.has_subjects());
        total += p.size();
    }
    CHECK(total == ds.size());

    // concatenation is a permutation of the original sample set
    std::multiset<std::string> before, after;
    for (const Sample& s : ds.samples)
        before.insert(*s.subject_id + "|" + std::to_string(s.features[0]) + "|" +
                      std::to_string(s.features[1]));
    for (const FeatureDataset& p : parts)
        for (const Sample& s : p.samples)
            after.insert(*s.subject_id + "|" + std::to_string(s.features[0]) + "|" +
                         std::to_string(s.features[1]));
    CHECK(before == after);
}

TEST_CASE("split_by_view requires a view column") {
    FeatureDataset ds = fixtures::make_blobs(3, 2, 5.0, 1);
    CHECK_THROWS_AS(split_by_view(ds), SchemaError);
}

TEST_CASE("single-view datasets split to one identical part") {
    FeatureDataset ds = fixtures::make_blobs(4, 2, 5.0, 2);
    ds.view_names = {"only"};
    for (Sample& s : ds.samples)
        s.view = 0;
    std::vector<FeatureDataset> parts = split_by_view(ds);
    REQUIRE(parts.size() == 1);
    REQUIRE(parts[0].size() == ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) {
        CHECK(parts[0].samples[i].features == ds.samples[i].features);
        CHECK(parts[0].samples[i].label == ds.samples[i].label);
        CHECK(*parts[0].samples[i].view == 0);
    }
}

TEST_CASE("save/load round-trips bit-exactly") {
    const std::string path = fixtures::temp_file("ficaug_roundtrip.csv");
    FeatureDataset ds = fixtures::make_blobs(7, 4, 3.0, 42);
    save_dataset(ds, path);
    FeatureDataset back = load_dataset(path, {});
    REQUIRE(back.size() == ds.size());
    CHECK(back.feature_names == ds.feature_names);
    CHECK(back.label_names == ds.label_names);
    for (std::size_t i = 0; i < ds.size(); ++i) {
        CHECK(back.samples[i].label == ds.samples[i].label);
        for (std::size_t j = 0; j < ds.dim(); ++j)
            CHECK(back.samples[i].features[j] == ds.samples[i].features[j]);
    }
}

TEST_CASE("standardize centers and scales") {
    FeatureDataset ds;
    ds.feature_names = {"f0", "f1"};
    ds.label_names = {"a", "b"};
    for (int i = 0; i < 3; ++i) {
        Sample s;
        s.label = i % 2;
        s.features = {static_cast<double>(i + 1), 5.0}; // f1 constant
        ds.samples.push_back(s);
    }
    auto [scaled, params] = standardize(ds);
    CHECK(scaled.samples[0].features[0] == doctest::Approx(-1.224744871).epsilon(1e-9));
    CHECK(scaled.samples[1].features[0] == doctest::Approx(0.0));
    CHECK(scaled.samples[2].features[0] == doctest::Approx(1.224744871).epsilon(1e-9));
    CHECK(params.constant[1]);
    CHECK(scaled.samples[0].features[1] == 5.0);

    FeatureDataset back = unstandardize(scaled, params);
    for (std::size_t i = 0; i < ds.size(); ++i)
        for (std::size_t j = 0; j < ds.dim(); ++j)
            CHECK(back.samples[i].features[j] ==
                  doctest::Approx(ds.samples[i].features[j]).epsilon(1e-12));
}

TEST_CASE("balanced leave-pair-out folds partition validation") {
    FeatureDataset ds = fixtures::make_blobs(5, 2, 4.0, 7);
    FoldPlan plan = make_leave_pair_out_folds(ds, 3);
    CHECK(plan.folds.size() == 5);
    std::set<int> seen;
    for (const auto& fold : plan.folds) {
        CHECK(ds.samples[fold.validation[0]].label == 0);
        CHECK(ds.samples[fold.validation[1]].label == 1);
        CHECK(fold.training.size() == ds.size() - 2);
        seen.insert(fold.validation[0]);
        seen.insert(fold.validation[1]);
        for (int id : fold.training) {
            CHECK(id != fold.validation[0]);
            CHECK(id != fold.validation[1]);
        }
    }
    CHECK(seen.size() == ds.size()); // every sample validates exactly once
}

TEST_CASE("25+25 samples give 25 folds") {
    FeatureDataset ds = fixtures::make_blobs(25, 3, 4.0, 11);
    CHECK(make_leave_pair_out_folds(ds, 1).folds.size() == 25);
}

TEST_CASE("unbalanced classes reuse the smaller class round-robin") {
    FeatureDataset ds;
    ds.feature_names = {"f0"};
    ds.label_names = {"ctrl", "pd"};
    for (int i = 0; i < 3; ++i) {
        Sample s;
        s.label = 0;
        s.features = {static_cast<double>(i)};
        ds.samples.push_back(s);
    }
    for (int i = 0; i < 5; ++i) {
        Sample s;
        s.label = 1;
        s.features = {10.0 + i};
        ds.samples.push_back(s);
    }
    FoldPlan plan = make_leave_pair_out_folds(ds, 5);
    CHECK(plan.folds.size() == 5);
    std::map<int, int> ctrl_counts, pd_counts;
    for (const auto& fold : plan.folds) {
        ++ctrl_counts[fold.validation[0]];
        ++pd_counts[fold.validation[1]];
    }
    CHECK(ctrl_counts.size() == 3);
    for (const auto& [id, n] : ctrl_counts)
        CHECK((n == 1 || n == 2)); // ceil(5/3) or floor(5/3)
    CHECK(pd_counts.size() == 5);
    for (const auto& [id, n] : pd_counts)
        CHECK(n == 1);
}

TEST_CASE("fold plans are deterministic in the seed") {
    FeatureDataset ds = fixtures::make_blobs(6, 2, 4.0, 9);
    FoldPlan p1 = make_leave_pair_out_folds(ds, 17);
    FoldPlan p2 = make_leave_pair_out_folds(ds, 17);
    FoldPlan p3 = make_leave_pair_out_folds(ds, 18);
    REQUIRE(p1.folds.size() == p2.folds.size());
    for (std::size_t f = 0; f < p1.folds.size(); ++f)
        CHECK(p1.folds[f].validation == p2.folds[f].validation);
    CHECK(p3.folds.size() == p1.folds.size()); // same count for equal classes
}

TEST_CASE("fold errors") {
    FeatureDataset three;
    three.feature_names = {"f0"};
    three.label_names = {"a", "b", "c"};
    for (int i = 0; i < 6; ++i) {
        Sample s;
        s.label = i % 3;
        s.features = {static_cast<double>(i)};
        three.samples.push_back(s);
    }
    CHECK_THROWS_AS(make_leave_pair_out_folds(three, 0), ConfigError);

    FeatureDataset tiny;
    tiny.feature_names = {"f0"};
    tiny.label_names = {"a", "b"};
    for (int i = 0; i < 3; ++i) {
        Sample s;
        s.label = i == 0 ? 0 : 1;
        s.features = {static_cast<double>(i)};
        tiny.samples.push_back(s);
    }
    CHECK_THROWS_AS(make_leave_pair_out_folds(tiny, 0), FoldError);
}
