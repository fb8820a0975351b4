#include "ficaug/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ficaug/errors.hpp"
#include "ficaug/rng.hpp"

namespace ficaug {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

long long round_half_even(double x) {
    double f = std::floor(x);
    double frac = x - f;
    if (frac > 0.5)
        return static_cast<long long>(f) + 1;
    if (frac < 0.5)
        return static_cast<long long>(f);
    long long fi = static_cast<long long>(f);
    return fi % 2 == 0 ? fi : fi + 1;
}

double singleton_radius(const Vec& parent_feature_stds, const AugmentConfig& cfg) {
    double r = cfg.singleton_scale * mean_of(parent_feature_stds);
    if (r <= 0.0)
        throw DegenerateGeometryError(
            "cluster radius is zero: parent features have no spread");
    return r;
}

} // namespace

double cluster_radius(const ClusterView& c, const Vec& parent_feature_stds,
                      const AugmentConfig& cfg) {
    if (c.points.size() == 1)
        return singleton_radius(parent_feature_stds, cfg);
    double dmin = 0.0, dmax = 0.0;
    for (std::size_t i = 0; i < c.points.size(); ++i) {
        double d = euclid(c.points[i], c.centroid);
        if (i == 0) {
            dmin = dmax = d;
        } else {
            dmin = std::min(dmin, d);
            dmax = std::max(dmax, d);
        }
    }
    double r = dmax + cfg.range_margin * (dmax - dmin);
    if (r <= 0.0) // coincident points degenerate to the singleton rule
        return singleton_radius(parent_feature_stds, cfg);
    return r;
}

Vec covariance_from_radius(double radius, std::size_t dim) {
    double sd = radius / 3.0;
    return Vec(dim, sd * sd);
}

SyntheticBatch sample_synthetic(const ClusterGeometry& geo, int q, std::uint64_t seed,
                                const std::string& node_path) {
    SyntheticBatch batch;
    batch.seed = seed;
    Rng rng(seed);
    for (int i = 0; i < q; ++i) {
        Vec x(geo.mu.size());
        for (std::size_t j = 0; j < x.size(); ++j)
            x[j] = geo.mu[j] + std::sqrt(geo.sigma_diag[j]) * rng.normal();
        batch.points.push_back(std::move(x));
        batch.labels.push_back(geo.source_label);
        batch.provenance.emplace_back(node_path, i);
    }
    return batch;
}

int synthetic_budget(int n_cluster, double alpha) {
    if (n_cluster <= 0 || alpha <= 0.0)
        throw ArgumentError("synthetic budget needs positive cluster size and alpha");
    long long q = round_half_even(alpha * static_cast<double>(n_cluster));
    return static_cast<int>(std::max(1LL, q));
}

std::pair<SyntheticBatch, RefinementTree> augment_dataset(const FeatureDataset& ds,
                                                          const RefinementConfig& refine_cfg,
                                                          const AugmentConfig& aug_cfg) {
    RefinementTree tree = refine_clusters(ds, refine_cfg);
    std::vector<PureCluster> pure = collect_pure_clusters(tree);

    SyntheticBatch batch;
    batch.seed = aug_cfg.seed;
    batch.alpha = aug_cfg.alpha;
    if (pure.empty()) {
        batch.warnings.push_back("no pure clusters; synthetic batch is empty");
        return {std::move(batch), std::move(tree)};
    }

    Rows all_rows = ds.feature_rows();
    for (const PureCluster& pc : pure) {
        // Spread of the previous clustering step: the parent node's members,
        // or the whole dataset for root-pass clusters.
        Vec parent_stds;
        if (pc.parent_index < 0) {
            parent_stds = feature_stds(all_rows);
        } else {
            parent_stds =
                feature_stds(tree.nodes[static_cast<std::size_t>(pc.parent_index)].view.points);
        }

        ClusterGeometry geo;
        geo.mu = pc.view.centroid;
        geo.source_label = pc.label;
        geo.source_size = static_cast<int>(pc.view.member_ids.size());
        try {
            geo.radius = cluster_radius(pc.view, parent_stds, aug_cfg);
        } catch (const DegenerateGeometryError& e) {
            batch.warnings.push_back("cluster " + pc.path + " skipped: " + e.what());
            continue;
        }
        geo.sigma_diag = covariance_from_radius(geo.radius, ds.dim());

        int q = synthetic_budget(geo.source_size, aug_cfg.alpha);
        SyntheticBatch frag =
            sample_synthetic(geo, q, derive_seed(aug_cfg.seed, pc.path), pc.path);
        for (std::size_t i = 0; i < frag.size(); ++i) {
            batch.points.push_back(std::move(frag.points[i]));
            batch.labels.push_back(frag.labels[i]);
            batch.provenance.push_back(std::move(frag.provenance[i]));
        }
    }
    if (batch.points.empty())
        batch.warnings.push_back("all pure clusters were skipped; synthetic batch is empty");
    return {std::move(batch), std::move(tree)};
}

SyntheticBatch gaussian_noise_augment(const FeatureDataset& ds, double sigma, double alpha,
                                      std::uint64_t seed) {
    if (sigma <= 0.0)
        throw ArgumentError("noise sigma must be positive");
    SyntheticBatch batch;
    batch.seed = seed;
    batch.alpha = alpha;
    const long long copies = std::max(0LL, round_half_even(alpha));
    Rng rng(seed);
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const Sample& s = ds.samples[i];
        for (long long c = 0; c < copies; ++c) {
            Vec x(s.features.size());
            for (std::size_t j = 0; j < x.size(); ++j)
                x[j] = s.features[j] + sigma * rng.normal();
            batch.points.push_back(std::move(x));
            batch.labels.push_back(s.label);
            batch.provenance.emplace_back("noise:" + std::to_string(i),
                                          static_cast<int>(c));
        }
    }
    return batch;
}

ExportResult export_attribute_vectors(const SyntheticBatch& batch, const std::string& path,
                                      const std::vector<std::string>& feature_names,
                                      const std::vector<std::string>& label_names,
                                      const std::optional<ClampRange>& clamp) {
    std::ofstream out(path);
    if (!out)
        throw ExportError("cannot open for writing: " + path);
    ExportResult res;
    out << "id,label";
    for (const std::string& f : feature_names)
        out << ',' << f;
    out << '\n';
    for (std::size_t i = 0; i < batch.size(); ++i) {
        out << batch.provenance[i].first << '#' << batch.provenance[i].second << ','
            << label_names[static_cast<std::size_t>(batch.labels[i])];
        for (double v : batch.points[i]) {
            if (clamp) {
                double c = std::clamp(v, clamp->lo, clamp->hi);
                if (c != v)
                    ++res.clamped_values;
                v = c;
            }
            out << ',' << fmt_double(v);
        }
        out << '\n';
        ++res.records;
    }
    if (!out)
        throw ExportError("write failed: " + path);
    return res;
}

void save_batch(const SyntheticBatch& batch, const std::string& path,
                const std::vector<std::string>& feature_names,
                const std::vector<std::string>& label_names) {
    std::ofstream out(path);
    if (!out)
        throw ExportError("cannot open for writing: " + path);
    out << "# ficaug-batch v1\n";
    out << "# seed=" << batch.seed << "\n";
    out << "# alpha=" << fmt_double(batch.alpha) << "\n";
    out << "node_path,draw,label";
    for (const std::string& f : feature_names)
        out << ',' << f;
    out << '\n';
    for (std::size_t i = 0; i < batch.size(); ++i) {
        out << batch.provenance[i].first << ',' << batch.provenance[i].second << ','
            << label_names[static_cast<std::size_t>(batch.labels[i])];
        for (double v : batch.points[i])
            out << ',' << fmt_double(v);
        out << '\n';
    }
    if (!out)
        throw ExportError("write failed: " + path);
}

SyntheticBatch load_batch(const std::string& path, const std::vector<std::string>& feature_names,
                          const std::vector<std::string>& label_names) {
    std::ifstream in(path);
    if (!in)
        throw IngestionError("cannot open batch file: " + path);
    SyntheticBatch batch;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        if (line[0] == '#') {
            std::istringstream meta(line.substr(1));
            std::string kv;
            meta >> kv;
            try {
                if (kv.rfind("seed=", 0) == 0)
                    batch.seed = std::stoull(kv.substr(5));
                else if (kv.rfind("alpha=", 0) == 0)
                    batch.alpha = std::stod(kv.substr(6));
            } catch (const std::exception&) {
                throw IngestionError(path + ":" + std::to_string(line_no) +
                                     ": bad metadata line '" + line + "'");
            }
            continue;
        }
        if (!header_seen) {
            header_seen = true; // column layout is fixed by the writer
            continue;
        }
        std::vector<std::string> cells;
        std::string cur;
        for (char c : line) {
            if (c == ',') {
                cells.push_back(cur);
                cur.clear();
            } else {
                cur.push_back(c);
            }
        }
        cells.push_back(cur);
        if (cells.size() != feature_names.size() + 3)
            throw IngestionError(path + ":" + std::to_string(line_no) +
                                 ": wrong cell count for a batch record");
        int label = -1;
        for (std::size_t l = 0; l < label_names.size(); ++l)
            if (label_names[l] == cells[2])
                label = static_cast<int>(l);
        if (label < 0)
            throw IngestionError(path + ":" + std::to_string(line_no) + ": unknown label '" +
                                 cells[2] + "'");
        Vec x(feature_names.size());
        for (std::size_t j = 0; j < x.size(); ++j) {
            try {
                x[j] = std::stod(cells[j + 3]);
            } catch (const std::exception&) {
                throw IngestionError(path + ":" + std::to_string(line_no) +
                                     ": bad feature value '" + cells[j + 3] + "'");
            }
        }
        batch.points.push_back(std::move(x));
        batch.labels.push_back(label);
        int draw = 0;
        try {
            draw = std::stoi(cells[1]);
        } catch (const std::exception&) {
            throw IngestionError(path + ":" + std::to_string(line_no) +
                                 ": bad draw index '" + cells[1] + "'");
        }
        batch.provenance.emplace_back(cells[0], draw);
    }
    return batch;
}

} // namespace ficaug
