#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ficaug/cli.hpp"
#include "ficaug/dataset.hpp"
#include "ficaug/sampler.hpp"
#include "support/fixtures.hpp"

using namespace ficaug;
namespace fs = std::filesystem;

namespace {

std::string blob_file(std::uint64_t seed = 3) {
    const std::string path = fixtures::temp_file("ficaug_cli_blobs.csv");
    save_dataset(fixtures::make_blobs(12, 4, 8.0, seed), path);
    return path;
}

std::string fresh_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir.string();
}

} // namespace

TEST_CASE("inspect succeeds on a valid file") {
    const std::string out = fresh_dir("ficaug_cli_inspect");
    CHECK(run_cli({"inspect", "--data", blob_file(), "--out", out}) == 0);
    CHECK(fs::exists(fs::path(out) / "manifest.json"));
}

TEST_CASE("schema errors exit with code 2") {
    const std::string out = fresh_dir("ficaug_cli_badschema");
    CHECK(run_cli({"inspect", "--data", blob_file(), "--label-col", "nope", "--out", out}) ==
          2);
    CHECK(run_cli({"inspect", "--data", "/definitely/missing.csv", "--out", out}) == 2);
}

TEST_CASE("cluster writes a tree report and an elbow curve") {
    const std::string data = blob_file();
    const std::string out = fresh_dir("ficaug_cli_cluster");
    CHECK(run_cli({"cluster", "--data", data, "--k", "3", "--out", out}) == 0);
    CHECK(fs::exists(fs::path(out) / "tree.txt"));

    CHECK(run_cli({"cluster", "--data", data, "--k-sweep", "2..5", "--out", out}) == 0);
    std::ifstream curve(fs::path(out) / "elbow.csv");
    int lines = 0;
    for (std::string line; std::getline(curve, line);)
        ++lines;
    CHECK(lines == 5); // header + 4 rows

    // root k <= classes is a configuration error
    CHECK(run_cli({"cluster", "--data", data, "--k", "2", "--out", out}) == 2);
}

TEST_CASE("augment then validate round-trips through files") {
    const std::string data = blob_file(9);
    const std::string out = fresh_dir("ficaug_cli_augment");
    CHECK(run_cli({"augment", "--data", data, "--k", "3", "--alpha", "2", "--seed", "5",
                   "--out", out}) == 0);
    const std::string batch = (fs::path(out) / "batch.csv").string();
    CHECK(fs::exists(batch));
    CHECK(fs::exists(fs::path(out) / "attribute_vectors.csv"));
    CHECK(fs::exists(fs::path(out) / "tree.txt"));
    CHECK(fs::exists(fs::path(out) / "manifest.json"));

    const std::string vout = fresh_dir("ficaug_cli_validate");
    CHECK(run_cli({"validate", "--data", data, "--synth", batch, "--n-per-side", "10",
                   "--out", vout}) == 0);
    CHECK(fs::exists(fs::path(vout) / "stats_report.txt"));
    CHECK(fs::exists(fs::path(vout) / "stats_report.csv"));
}

TEST_CASE("augment runs are bit-identical for a fixed seed") {
    const std::string data = blob_file(21);
    const std::string out1 = fresh_dir("ficaug_cli_det1");
    const std::string out2 = fresh_dir("ficaug_cli_det2");
    for (const std::string& out : {out1, out2})
        CHECK(run_cli({"augment", "--data", data, "--k", "3", "--alpha", "1.5", "--seed",
                       "42", "--out", out}) == 0);
    CHECK(file_digest((fs::path(out1) / "batch.csv").string()) ==
          file_digest((fs::path(out2) / "batch.csv").string()));
    CHECK(file_digest((fs::path(out1) / "attribute_vectors.csv").string()) ==
          file_digest((fs::path(out2) / "attribute_vectors.csv").string()));
}

TEST_CASE("compare produces a deterministic experiment report") {
    const std::string data = blob_file(33);
    const std::string out1 = fresh_dir("ficaug_cli_cmp1");
    const std::string out2 = fresh_dir("ficaug_cli_cmp2");
    const std::vector<std::string> args_base = {
        "compare", "--data", data,       "--k",          "3",   "--alpha", "2",
        "--seed",  "7",      "--methods", "baseline,ficaug", "--classifiers", "knn",
    };
    for (const std::string& out : {out1, out2}) {
        std::vector<std::string> args = args_base;
        args.push_back("--out");
        args.push_back(out);
        CHECK(run_cli(args) == 0);
    }
    CHECK(file_digest((fs::path(out1) / "experiment.json").string()) ==
          file_digest((fs::path(out2) / "experiment.json").string()));
    CHECK(fs::exists(fs::path(out1) / "experiment.txt"));
}

TEST_CASE("inspect prints the per-view table") {
    // one row per subject x view across three views
    FeatureDataset ds;
    ds.feature_names = {"f0"};
    ds.label_names = {"ctrl", "pd"};
    ds.view_names = {"v0", "v1", "v2"};
    for (int subj = 0; subj < 4; ++subj)
        for (int v = 0; v < 3; ++v) {
            Sample s;
            s.label = subj % 2;
            s.subject_id = "s" + std::to_string(subj);
            s.view = v;
            s.features = {subj + 0.5 * v};
            ds.samples.push_back(s);
        }
    const std::string path = fixtures::temp_file("ficaug_cli_viewed.csv");
    save_dataset(ds, path);

    const std::string out = fresh_dir("ficaug_cli_viewtab");
    std::ostringstream captured;
    std::streambuf* saved = std::cout.rdbuf(captured.rdbuf());
    int code = run_cli({"inspect", "--data", path, "--subject-col", "subject", "--view-col",
                        "view", "--out", out});
    std::cout.rdbuf(saved);
    CHECK(code == 0);
    const std::string text = captured.str();
    CHECK(text.find("n=12 d=1 classes={ctrl:6,pd:6}") != std::string::npos);
    for (const char* v : {"v0", "v1", "v2"})
        CHECK(text.find(v) != std::string::npos);
}

TEST_CASE("runtime failures exit with code 3") {
    const std::string out = fresh_dir("ficaug_cli_diverge");
    CHECK(run_cli({"compare", "--data", blob_file(77), "--k", "3", "--methods", "baseline",
                   "--classifiers", "mlp", "--mlp-lr", "1e8", "--mlp-epochs", "300", "--out",
                   out}) == 3);
}

TEST_CASE("bad numeric flags exit with code 2") {
    const std::string out = fresh_dir("ficaug_cli_badnum");
    CHECK(run_cli({"augment", "--data", blob_file(), "--k", "3", "--clamp-range", "a,b",
                   "--out", out}) == 2);
}

TEST_CASE("an all-mixed dataset augments to empty files with exit 0") {
    // both labels at each location: every cluster stays mixed at threshold 1
    FeatureDataset ds;
    ds.feature_names = {"f0"};
    ds.label_names = {"a", "b"};
    for (int i = 0; i < 6; ++i)
        for (int c = 0; c < 2; ++c) {
            Sample s;
            s.label = c;
            s.features = {static_cast<double>(i * 5)};
            ds.samples.push_back(s);
        }
    const std::string path = fixtures::temp_file("ficaug_cli_mixed.csv");
    save_dataset(ds, path);
    const std::string out = fresh_dir("ficaug_cli_mixed");
    CHECK(run_cli({"augment", "--data", path, "--k", "3", "--threshold", "1.0", "--out",
                   out}) == 0);
    SyntheticBatch batch = load_batch((fs::path(out) / "batch.csv").string(),
                                      ds.feature_names, ds.label_names);
    CHECK(batch.size() == 0);
}

TEST_CASE("FICAUG_OUT supplies the default output directory") {
    const std::string out = fresh_dir("ficaug_cli_envout");
    setenv("FICAUG_OUT", out.c_str(), 1);
    CHECK(run_cli({"inspect", "--data", blob_file()}) == 0);
    unsetenv("FICAUG_OUT");
    CHECK(fs::exists(fs::path(out) / "manifest.json"));
}

TEST_CASE("config file values are overridden by flags") {
    const std::string data = blob_file(50);
    const std::string out = fresh_dir("ficaug_cli_config");
    const std::string cfg_path = fixtures::temp_file("ficaug_cli_cfg.json");
    fixtures::write_file(cfg_path, "{\"dataset\": {\"path\": \"" + data +
                                       "\"}, \"kmeans\": {\"k\": 3}, \"seed\": 4}\n");
    CHECK(run_cli({"cluster", "--config", cfg_path, "--out", out}) == 0);
    // flag wins over the file
    CHECK(run_cli({"cluster", "--config", cfg_path, "--k", "2", "--out", out}) == 2);
}
