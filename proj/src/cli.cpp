#include "ficaug/cli.hpp"

#include <array>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <tuple>

#include <CLI11.hpp>
#include <json.hpp>

#include "ficaug/classify.hpp"
#include "ficaug/dataset.hpp"
#include "ficaug/errors.hpp"
#include "ficaug/kmeans.hpp"
#include "ficaug/purity.hpp"
#include "ficaug/rng.hpp"
#include "ficaug/sampler.hpp"
#include "ficaug/stats.hpp"

namespace ficaug {

namespace {

using nlohmann::json;

struct RunConfig {
    std::string dataset_path;
    ColumnSchema schema;
    bool standardize = false;

    KMeansConfig kmeans; // seed filled from the root seed unless overridden
    double threshold = 0.5;
    int max_depth = 8;

    double alpha = 1.0;
    std::optional<ClampRange> clamp = ClampRange{0.0, 5.0};

    int n_per_side = 20;

    std::vector<std::string> methods = {"baseline", "gn", "ficaug"};
    std::vector<std::string> classifiers = {"knn", "mlp"};
    std::vector<double> alpha_grid;
    double gn_sigma = 0.1;
    KnnConfig knn;
    MlpConfig mlp;

    std::uint64_t seed = 0;
    std::optional<std::uint64_t> kmeans_seed;
    std::optional<std::uint64_t> aug_seed;
    std::optional<std::uint64_t> run_seed;

    std::string out_dir;
    std::string test_path;
    std::string synth_path;

    std::uint64_t effective_kmeans_seed() const {
        return kmeans_seed ? *kmeans_seed : derive_seed(seed, "kmeans");
    }
    std::uint64_t effective_aug_seed() const {
        return aug_seed ? *aug_seed : derive_seed(seed, "augment");
    }
    std::uint64_t effective_run_seed() const {
        return run_seed ? *run_seed : derive_seed(seed, "run");
    }
};

double parse_num(const std::string& s, const char* what) {
    try {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size())
            throw ConfigError(std::string(what) + ": bad number '" + s + "'");
        return v;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        throw ConfigError(std::string(what) + ": bad number '" + s + "'");
    }
}

int parse_int(const std::string& s, const char* what) {
    double v = parse_num(s, what);
    return static_cast<int>(v);
}

std::vector<std::string> split_list(const std::string& s, char delim) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == delim) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty())
        out.push_back(cur);
    return out;
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config file " + path + " is not valid JSON: " + e.what());
    }
    if (j.contains("dataset")) {
        const json& d = j["dataset"];
        if (d.contains("path"))
            cfg.dataset_path = d["path"].get<std::string>();
        if (d.contains("label_col"))
            cfg.schema.label_col = d["label_col"].get<std::string>();
        if (d.contains("subject_col"))
            cfg.schema.subject_col = d["subject_col"].get<std::string>();
        if (d.contains("view_col"))
            cfg.schema.view_col = d["view_col"].get<std::string>();
        if (d.contains("feature_cols"))
            cfg.schema.feature_cols = d["feature_cols"].get<std::vector<std::string>>();
        if (d.contains("standardize"))
            cfg.standardize = d["standardize"].get<bool>();
    }
    if (j.contains("kmeans")) {
        const json& k = j["kmeans"];
        if (k.contains("k"))
            cfg.kmeans.k = k["k"].get<int>();
        if (k.contains("max_iters"))
            cfg.kmeans.max_iters = k["max_iters"].get<int>();
        if (k.contains("tol"))
            cfg.kmeans.tol = k["tol"].get<double>();
        if (k.contains("n_init"))
            cfg.kmeans.n_init = k["n_init"].get<int>();
    }
    if (j.contains("refine")) {
        const json& r = j["refine"];
        if (r.contains("threshold"))
            cfg.threshold = r["threshold"].get<double>();
        if (r.contains("max_depth"))
            cfg.max_depth = r["max_depth"].get<int>();
    }
    if (j.contains("augment")) {
        const json& a = j["augment"];
        if (a.contains("alpha"))
            cfg.alpha = a["alpha"].get<double>();
        if (a.contains("no_clamp") && a["no_clamp"].get<bool>())
            cfg.clamp.reset();
        else if (a.contains("clamp"))
            cfg.clamp = ClampRange{a["clamp"][0].get<double>(), a["clamp"][1].get<double>()};
    }
    if (j.contains("stats") && j["stats"].contains("n_per_side"))
        cfg.n_per_side = j["stats"]["n_per_side"].get<int>();
    if (j.contains("classify")) {
        const json& c = j["classify"];
        if (c.contains("methods"))
            cfg.methods = c["methods"].get<std::vector<std::string>>();
        if (c.contains("classifiers"))
            cfg.classifiers = c["classifiers"].get<std::vector<std::string>>();
        if (c.contains("alpha_grid"))
            cfg.alpha_grid = c["alpha_grid"].get<std::vector<double>>();
        if (c.contains("gn_sigma"))
            cfg.gn_sigma = c["gn_sigma"].get<double>();
        if (c.contains("knn_k"))
            cfg.knn.k_neighbors = c["knn_k"].get<int>();
        if (c.contains("mlp")) {
            const json& m = c["mlp"];
            if (m.contains("hidden"))
                cfg.mlp.hidden = m["hidden"].get<int>();
            if (m.contains("learning_rate"))
                cfg.mlp.learning_rate = m["learning_rate"].get<double>();
            if (m.contains("epochs"))
                cfg.mlp.epochs = m["epochs"].get<int>();
            if (m.contains("batch_size"))
                cfg.mlp.batch_size = m["batch_size"].get<int>();
            if (m.contains("l2"))
                cfg.mlp.l2 = m["l2"].get<double>();
        }
    }
    if (j.contains("seed"))
        cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("out"))
        cfg.out_dir = j["out"].get<std::string>();
    if (j.contains("test"))
        cfg.test_path = j["test"].get<std::string>();
    if (j.contains("synth"))
        cfg.synth_path = j["synth"].get<std::string>();
}

json config_to_json(const RunConfig& cfg) {
    json j;
    j["dataset"]["path"] = cfg.dataset_path;
    j["dataset"]["label_col"] = cfg.schema.label_col;
    if (cfg.schema.subject_col)
        j["dataset"]["subject_col"] = *cfg.schema.subject_col;
    if (cfg.schema.view_col)
        j["dataset"]["view_col"] = *cfg.schema.view_col;
    if (cfg.schema.feature_cols)
        j["dataset"]["feature_cols"] = *cfg.schema.feature_cols;
    j["dataset"]["standardize"] = cfg.standardize;
    j["kmeans"] = {{"k", cfg.kmeans.k},
                   {"max_iters", cfg.kmeans.max_iters},
                   {"tol", cfg.kmeans.tol},
                   {"n_init", cfg.kmeans.n_init}};
    j["refine"] = {{"threshold", cfg.threshold}, {"max_depth", cfg.max_depth}};
    j["augment"]["alpha"] = cfg.alpha;
    if (cfg.clamp)
        j["augment"]["clamp"] = {cfg.clamp->lo, cfg.clamp->hi};
    else
        j["augment"]["no_clamp"] = true;
    j["stats"]["n_per_side"] = cfg.n_per_side;
    j["classify"] = {{"methods", cfg.methods},
                     {"classifiers", cfg.classifiers},
                     {"alpha_grid", cfg.alpha_grid},
                     {"gn_sigma", cfg.gn_sigma},
                     {"knn_k", cfg.knn.k_neighbors},
                     {"mlp",
                      {{"hidden", cfg.mlp.hidden},
                       {"learning_rate", cfg.mlp.learning_rate},
                       {"epochs", cfg.mlp.epochs},
                       {"batch_size", cfg.mlp.batch_size},
                       {"l2", cfg.mlp.l2}}}};
    j["seed"] = cfg.seed;
    if (!cfg.test_path.empty())
        j["test"] = cfg.test_path;
    if (!cfg.synth_path.empty())
        j["synth"] = cfg.synth_path;
    return j;
}

struct Manifest {
    std::string command;
    json config;
    json seeds;
    json inputs = json::object();
    json outputs = json::object();

    void add_input(const std::string& path) { inputs[path] = file_digest(path); }
    void add_output(const std::string& path) {
        outputs[std::filesystem::path(path).filename().string()] = file_digest(path);
    }
    void write(const std::string& path) const {
        json j;
        j["command"] = command;
        j["config"] = config;
        j["seeds"] = seeds;
        j["inputs"] = inputs;
        j["outputs"] = outputs;
        std::ofstream out(path);
        if (!out)
            throw ExportError("cannot write manifest: " + path);
        out << j.dump(2) << '\n';
    }
};

Manifest make_manifest(const std::string& command, const RunConfig& cfg) {
    Manifest m;
    m.command = command;
    m.config = config_to_json(cfg);
    m.seeds = {{"root", cfg.seed},
               {"kmeans", cfg.effective_kmeans_seed()},
               {"augment", cfg.effective_aug_seed()},
               {"run", cfg.effective_run_seed()},
               {"stats", derive_seed(cfg.seed, "stats")}};
    return m;
}

FeatureDataset load_input(const RunConfig& cfg) {
    if (cfg.dataset_path.empty())
        throw ConfigError("no dataset given (use --data or the config file)");
    FeatureDataset ds = load_dataset(cfg.dataset_path, cfg.schema);
    if (cfg.standardize)
        ds = standardize(ds).first;
    return ds;
}

RefinementConfig refinement_config(const RunConfig& cfg) {
    RefinementConfig rcfg;
    rcfg.threshold = cfg.threshold;
    rcfg.max_depth = cfg.max_depth;
    rcfg.kmeans = cfg.kmeans;
    rcfg.kmeans.seed = cfg.effective_kmeans_seed();
    return rcfg;
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
    std::filesystem::create_directories(cfg.out_dir);
    return (std::filesystem::path(cfg.out_dir) / name).string();
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out)
        throw ExportError("cannot open for writing: " + path);
    out << content;
    if (!out)
        throw ExportError("write failed: " + path);
}

// ------------------------------------------------------------- commands

int cmd_inspect(const RunConfig& cfg) {
    FeatureDataset ds = load_input(cfg);
    std::ostringstream line;
    line << "n=" << ds.size() << " d=" << ds.dim() << " classes={";
    std::vector<int> hist = ds.label_histogram();
    for (std::size_t l = 0; l < ds.label_names.size(); ++l) {
        if (l)
            line << ',';
        line << ds.label_names[l] << ':' << hist[l];
    }
    line << '}';
    std::cout << line.str() << '\n';

    if (ds.has_views()) {
        std::vector<int> counts(ds.view_names.size(), 0);
        for (const Sample& s : ds.samples)
            ++counts[static_cast<std::size_t>(*s.view)];
        std::cout << "views:\n";
        for (std::size_t v = 0; v < ds.view_names.size(); ++v)
            std::cout << "  " << ds.view_names[v] << '\t' << counts[v] << '\n';
    }
    std::cout << "feature ranges:\n";
    for (std::size_t j = 0; j < ds.dim(); ++j) {
        double lo = ds.samples[0].features[j], hi = lo;
        for (const Sample& s : ds.samples) {
            lo = std::min(lo, s.features[j]);
            hi = std::max(hi, s.features[j]);
        }
        char buf[160];
        std::snprintf(buf, sizeof(buf), "  %s\t[%g, %g]\n", ds.feature_names[j].c_str(), lo,
                      hi);
        std::cout << buf;
    }

    Manifest m = make_manifest("inspect", cfg);
    m.add_input(cfg.dataset_path);
    m.write(out_path(cfg, "manifest.json"));
    return 0;
}

int cmd_cluster(const RunConfig& cfg, const std::string& sweep_range) {
    FeatureDataset ds = load_input(cfg);
    Manifest m = make_manifest("cluster", cfg);
    m.add_input(cfg.dataset_path);

    if (!sweep_range.empty()) {
        auto pos = sweep_range.find("..");
        if (pos == std::string::npos)
            throw ConfigError("--k-sweep expects a range like 2..10");
        int lo = parse_int(sweep_range.substr(0, pos), "--k-sweep");
        int hi = parse_int(sweep_range.substr(pos + 2), "--k-sweep");
        KMeansConfig kcfg = cfg.kmeans;
        kcfg.seed = cfg.effective_kmeans_seed();
        auto curve = sweep_k(ds.feature_rows(), lo, hi, kcfg);
        std::ostringstream out;
        out << "k,inertia\n";
        char buf[64];
        for (const auto& [k, inertia] : curve) {
            std::snprintf(buf, sizeof(buf), "%d,%.17g\n", k, inertia);
            out << buf;
        }
        const std::string curve_path = out_path(cfg, "elbow.csv");
        write_text(curve_path, out.str());
        std::cout << out.str();
        m.add_output(curve_path);
        m.write(out_path(cfg, "manifest.json"));
        return 0;
    }

    RefinementTree tree = refine_clusters(ds, refinement_config(cfg));
    const std::string report = tree_report(tree, ds);
    const std::string tree_path = out_path(cfg, "tree.txt");
    write_text(tree_path, report);
    std::size_t pure = tree.pure_leaves().size();
    std::size_t discarded = tree.discarded_leaves().size();
    std::size_t splits = 0, retained = 0;
    for (const auto& node : tree.nodes) {
        if (node.status == NodeStatus::Split)
            ++splits;
        if (node.status == NodeStatus::PureLeaf)
            retained += node.view.member_ids.size();
    }
    std::cout << "nodes=" << tree.nodes.size() << " pure_leaves=" << pure
              << " mixed_discarded=" << discarded << " splits=" << splits
              << " retained_samples=" << retained << "/" << ds.size() << '\n';
    m.add_output(tree_path);
    m.write(out_path(cfg, "manifest.json"));
    return 0;
}

int cmd_augment(const RunConfig& cfg) {
    FeatureDataset ds = load_input(cfg);
    AugmentConfig acfg;
    acfg.alpha = cfg.alpha;
    acfg.seed = cfg.effective_aug_seed();
    auto [batch, tree] = augment_dataset(ds, refinement_config(cfg), acfg);

    for (const std::string& w : batch.warnings)
        std::cerr << "warning: " << w << '\n';

    const std::string batch_path = out_path(cfg, "batch.csv");
    save_batch(batch, batch_path, ds.feature_names, ds.label_names);
    const std::string export_path = out_path(cfg, "attribute_vectors.csv");
    ExportResult exp = export_attribute_vectors(batch, export_path, ds.feature_names,
                                                ds.label_names, cfg.clamp);
    const std::string tree_path = out_path(cfg, "tree.txt");
    write_text(tree_path, tree_report(tree, ds));

    std::cout << "synthetic points: " << batch.size() << '\n';
    std::cout << "clamped values: " << exp.clamped_values << '\n';

    Manifest m = make_manifest("augment", cfg);
    m.add_input(cfg.dataset_path);
    m.add_output(batch_path);
    m.add_output(export_path);
    m.add_output(tree_path);
    m.write(out_path(cfg, "manifest.json"));
    return 0;
}

int cmd_validate(const RunConfig& cfg) {
    FeatureDataset ds = load_input(cfg);
    if (cfg.synth_path.empty())
        throw ConfigError("validate needs --synth with a batch file");
    SyntheticBatch batch = load_batch(cfg.synth_path, ds.feature_names, ds.label_names);
    TestReport report =
        similarity_report(ds, batch, cfg.n_per_side, derive_seed(cfg.seed, "stats"));

    const std::string text = render_report(report);
    const std::string txt_path = out_path(cfg, "stats_report.txt");
    write_text(txt_path, text);
    std::ostringstream csv;
    csv << "feature,class,p_t,p_levene,p_ks\n";
    char buf[160];
    for (const auto& row : report.rows) {
        std::snprintf(buf, sizeof(buf), "%s,%s,%.17g,%.17g,%.17g\n", row.feature.c_str(),
                      row.label.c_str(), row.p_t, row.p_levene, row.p_ks);
        csv << buf;
    }
    const std::string csv_path = out_path(cfg, "stats_report.csv");
    write_text(csv_path, csv.str());
    std::cout << text;

    Manifest m = make_manifest("validate", cfg);
    m.add_input(cfg.dataset_path);
    m.add_input(cfg.synth_path);
    m.add_output(txt_path);
    m.add_output(csv_path);
    m.write(out_path(cfg, "manifest.json"));
    return 0;
}

int cmd_compare(const RunConfig& cfg) {
    if (cfg.dataset_path.empty())
        throw ConfigError("no dataset given (use --data or the config file)");
    FeatureDataset ds = load_dataset(cfg.dataset_path, cfg.schema);
    ScalingParams scaling;
    if (cfg.standardize)
        std::tie(ds, scaling) = standardize(ds);
    std::optional<FeatureDataset> test;
    if (!cfg.test_path.empty()) {
        test = load_dataset(cfg.test_path, cfg.schema);
        if (cfg.standardize) // the training set's parameters, not the test's
            *test = apply_scaling(*test, scaling);
    }

    CvConfig ccfg;
    ccfg.run_seed = cfg.effective_run_seed();
    ccfg.refine = refinement_config(cfg);
    ccfg.augment.alpha = cfg.alpha;
    ccfg.augment.seed = cfg.effective_aug_seed();
    ccfg.gn_sigma = cfg.gn_sigma;
    ccfg.knn = cfg.knn;
    ccfg.mlp = cfg.mlp;

    std::vector<AugMethod> methods;
    for (const std::string& name : cfg.methods)
        methods.push_back(method_from_name(name));

    ExperimentReport report = compare_methods(ds, methods, cfg.classifiers, ccfg,
                                              cfg.alpha_grid, test ? &*test : nullptr);
    report.metadata["run_seed"] = std::to_string(ccfg.run_seed);
    report.metadata["gn_sigma"] = std::to_string(cfg.gn_sigma);
    report.metadata["threshold"] = std::to_string(cfg.threshold);
    report.metadata["root_k"] = std::to_string(cfg.kmeans.k);
    report.metadata["standardized"] = cfg.standardize ? "true" : "false";
    report.metadata["classifier_set"] = "knn,mlp (native)";
    report.metadata["t_test"] = "welch two-sided";
    report.metadata["fold_protocol"] = "leave-pair-out, per-fold augmentation";

    const std::string json_path = out_path(cfg, "experiment.json");
    write_text(json_path, experiment_to_json(report));
    const std::string text = render_experiment(report);
    const std::string txt_path = out_path(cfg, "experiment.txt");
    write_text(txt_path, text);
    std::cout << text;

    Manifest m = make_manifest("compare", cfg);
    m.add_input(cfg.dataset_path);
    if (!cfg.test_path.empty())
        m.add_input(cfg.test_path);
    m.add_output(json_path);
    m.add_output(txt_path);
    m.write(out_path(cfg, "manifest.json"));
    return 0;
}

} // namespace

std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw RuntimeFailure("cannot open for digest: " + path);
    std::uint64_t h = 1469598103934665603ULL;
    char buf[4096];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i)
            h = (h ^ static_cast<unsigned char>(buf[i])) * 1099511628211ULL;
        if (in.eof())
            break;
    }
    char hex[24];
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(h));
    return hex;
}

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"feature-space augmentation pipeline"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, out_dir, sweep_range, feature_cols, clamp_range, methods,
        classifiers, alpha_grid;
    bool no_clamp = false;

    RunConfig defaults; // only used for CLI11 default hints
    app.add_option("--config", config_path, "JSON config file");
    auto* seed_opt = app.add_option("--seed", defaults.seed, "root seed");
    auto* out_opt = app.add_option("--out", out_dir, "output directory");

    struct SubFlags {
        CLI::App* sub = nullptr;
        std::string data, label_col, subject_col, view_col;
        bool standardize = false;
    };
    // stable storage: CLI11 keeps pointers to these members
    std::array<SubFlags, 5> flags;
    auto add_data_flags = [&](CLI::App* sub, SubFlags& f) {
        f.sub = sub;
        sub->add_option("--data", f.data, "dataset file (delimited text with a header)");
        sub->add_option("--label-col", f.label_col, "label column name");
        sub->add_option("--subject-col", f.subject_col, "subject id column name");
        sub->add_option("--view-col", f.view_col, "view column name");
        sub->add_option("--feature-cols", feature_cols,
                        "comma-separated feature column names");
        sub->add_flag("--standardize", f.standardize, "zero-mean/unit-variance features");
    };

    CLI::App* inspect = app.add_subcommand("inspect", "dataset summary");
    CLI::App* cluster = app.add_subcommand("cluster", "refinement tree or k sweep");
    CLI::App* augment = app.add_subcommand("augment", "generate a synthetic batch");
    CLI::App* validate = app.add_subcommand("validate", "real-vs-synthetic test table");
    CLI::App* compare = app.add_subcommand("compare", "method comparison experiment");

    add_data_flags(inspect, flags[0]);
    add_data_flags(cluster, flags[1]);
    add_data_flags(augment, flags[2]);
    add_data_flags(validate, flags[3]);
    add_data_flags(compare, flags[4]);

    int k = 0, max_depth = 0, n_per_side = 0, knn_k = 0, mlp_hidden = 0, mlp_epochs = 0,
        mlp_batch = 0;
    double threshold = 0, alpha = 0, gn_sigma = 0, mlp_lr = 0, mlp_l2 = 0;
    std::uint64_t kmeans_seed = 0, aug_seed = 0, run_seed = 0;
    std::string synth_path, test_path;

    auto* k_opt = cluster->add_option("--k", k, "root cluster count");
    cluster->add_option("--k-sweep", sweep_range, "inertia curve over a k range, e.g. 2..10");
    auto* ks_opt = cluster->add_option("--kmeans-seed", kmeans_seed, "k-means seed override");
    auto* th_opt = cluster->add_option("--threshold", threshold, "separation threshold in [0,1]");
    auto* md_opt = cluster->add_option("--max-depth", max_depth, "refinement depth limit");

    auto* k_opt2 = augment->add_option("--k", k, "root cluster count");
    auto* ks_opt2 = augment->add_option("--kmeans-seed", kmeans_seed, "k-means seed override");
    auto* th_opt2 = augment->add_option("--threshold", threshold, "separation threshold");
    auto* md_opt2 = augment->add_option("--max-depth", max_depth, "refinement depth limit");
    auto* al_opt = augment->add_option("--alpha", alpha, "synthetic budget multiplier");
    auto* as_opt = augment->add_option("--aug-seed", aug_seed, "sampling seed override");
    augment->add_option("--clamp-range", clamp_range, "export clamp range lo,hi");
    augment->add_flag("--no-clamp", no_clamp, "disable export clamping");

    validate->add_option("--synth", synth_path, "synthetic batch file")->required();
    auto* nps_opt = validate->add_option("--n-per-side", n_per_side, "samples per class per side");

    auto* k_opt3 = compare->add_option("--k", k, "root cluster count");
    auto* th_opt3 = compare->add_option("--threshold", threshold, "separation threshold");
    auto* md_opt3 = compare->add_option("--max-depth", max_depth, "refinement depth limit");
    auto* al_opt2 = compare->add_option("--alpha", alpha, "synthetic budget multiplier");
    compare->add_option("--alpha-grid", alpha_grid, "comma-separated alpha candidates");
    compare->add_option("--methods", methods, "comma-separated methods (baseline,gn,ficaug)");
    compare->add_option("--classifiers", classifiers, "comma-separated classifiers (knn,mlp)");
    auto* gs_opt = compare->add_option("--gn-sigma", gn_sigma, "gaussian-noise std");
    auto* rs_opt = compare->add_option("--run-seed", run_seed, "cv seed override");
    compare->add_option("--test", test_path, "held-out test dataset");
    auto* kk_opt = compare->add_option("--knn-k", knn_k, "kNN neighbour count");
    auto* mh_opt = compare->add_option("--mlp-hidden", mlp_hidden, "MLP hidden width");
    auto* mlr_opt = compare->add_option("--mlp-lr", mlp_lr, "MLP learning rate");
    auto* me_opt = compare->add_option("--mlp-epochs", mlp_epochs, "MLP epochs");
    auto* mb_opt = compare->add_option("--mlp-batch", mlp_batch, "MLP batch size (0=full)");
    auto* ml2_opt = compare->add_option("--mlp-l2", mlp_l2, "MLP L2 coefficient");

    std::vector<const char*> argv;
    argv.push_back("ficaug");
    for (const std::string& a : args)
        argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        RunConfig cfg;
        if (!config_path.empty())
            apply_config_file(cfg, config_path);
        if (seed_opt->count())
            cfg.seed = defaults.seed;

        CLI::App* sub = app.get_subcommands().front();
        for (const SubFlags& f : flags) {
            if (f.sub != sub)
                continue;
            if (!f.data.empty())
                cfg.dataset_path = f.data;
            if (!f.label_col.empty())
                cfg.schema.label_col = f.label_col;
            if (!f.subject_col.empty())
                cfg.schema.subject_col = f.subject_col;
            if (!f.view_col.empty())
                cfg.schema.view_col = f.view_col;
            if (f.standardize)
                cfg.standardize = true;
        }
        if (!feature_cols.empty())
            cfg.schema.feature_cols = split_list(feature_cols, ',');

        if (k_opt->count() || k_opt2->count() || k_opt3->count())
            cfg.kmeans.k = k;
        if (th_opt->count() || th_opt2->count() || th_opt3->count())
            cfg.threshold = threshold;
        if (md_opt->count() || md_opt2->count() || md_opt3->count())
            cfg.max_depth = max_depth;
        if (ks_opt->count() || ks_opt2->count())
            cfg.kmeans_seed = kmeans_seed;
        if (al_opt->count() || al_opt2->count())
            cfg.alpha = alpha;
        if (as_opt->count())
            cfg.aug_seed = aug_seed;
        if (rs_opt->count())
            cfg.run_seed = run_seed;
        if (nps_opt->count())
            cfg.n_per_side = n_per_side;
        if (gs_opt->count())
            cfg.gn_sigma = gn_sigma;
        if (kk_opt->count())
            cfg.knn.k_neighbors = knn_k;
        if (mh_opt->count())
            cfg.mlp.hidden = mlp_hidden;
        if (mlr_opt->count())
            cfg.mlp.learning_rate = mlp_lr;
        if (me_opt->count())
            cfg.mlp.epochs = mlp_epochs;
        if (mb_opt->count())
            cfg.mlp.batch_size = mlp_batch;
        if (ml2_opt->count())
            cfg.mlp.l2 = mlp_l2;
        if (!methods.empty())
            cfg.methods = split_list(methods, ',');
        if (!classifiers.empty())
            cfg.classifiers = split_list(classifiers, ',');
        if (!alpha_grid.empty()) {
            cfg.alpha_grid.clear();
            for (const std::string& s : split_list(alpha_grid, ','))
                cfg.alpha_grid.push_back(parse_num(s, "--alpha-grid"));
        }
        if (no_clamp)
            cfg.clamp.reset();
        else if (!clamp_range.empty()) {
            auto parts = split_list(clamp_range, ',');
            if (parts.size() != 2)
                throw ConfigError("--clamp-range expects lo,hi");
            cfg.clamp = ClampRange{parse_num(parts[0], "--clamp-range"),
                                   parse_num(parts[1], "--clamp-range")};
        }
        if (!synth_path.empty())
            cfg.synth_path = synth_path;
        if (!test_path.empty())
            cfg.test_path = test_path;

        // output dir precedence: flag > environment > config file > default
        if (out_opt->count())
            cfg.out_dir = out_dir;
        else if (const char* env = std::getenv("FICAUG_OUT"); env && *env)
            cfg.out_dir = env;
        else if (cfg.out_dir.empty())
            cfg.out_dir = "ficaug_out";

        if (sub == inspect)
            return cmd_inspect(cfg);
        if (sub == cluster)
            return cmd_cluster(cfg, sweep_range);
        if (sub == augment)
            return cmd_augment(cfg);
        if (sub == validate)
            return cmd_validate(cfg);
        if (sub == compare)
            return cmd_compare(cfg);
        throw ConfigError("no command given");
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}

} // namespace ficaug
