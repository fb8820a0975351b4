#include "ficaug/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "ficaug/errors.hpp"

namespace ficaug {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line, char delim) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == delim) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

bool parse_double(const std::string& cell, double& out) {
    std::string t = trim(cell);
    if (t.empty())
        return false;
    const char* first = t.data();
    const char* last = t.data() + t.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

int find_column(const std::vector<std::string>& header, const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name)
            return static_cast<int>(i);
    return -1;
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

Rows FeatureDataset::feature_rows() const {
    Rows out;
    out.reserve(samples.size());
    for (const Sample& s : samples)
        out.push_back(s.features);
    return out;
}

std::vector<int> FeatureDataset::labels() const {
    std::vector<int> out;
    out.reserve(samples.size());
    for (const Sample& s : samples)
        out.push_back(s.label);
    return out;
}

std::vector<int> FeatureDataset::label_histogram() const {
    std::vector<int> hist(label_names.size(), 0);
    for (const Sample& s : samples)
        ++hist[static_cast<std::size_t>(s.label)];
    return hist;
}

void FeatureDataset::validate() const {
    if (label_names.size() < 2)
        throw DatasetError("dataset must have at least 2 distinct labels, found " +
                           std::to_string(label_names.size()));
    const std::size_t d = feature_names.size();
    std::vector<bool> seen(label_names.size(), false);
    const bool want_subject = has_subjects();
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const Sample& s = samples[i];
        if (s.features.size() != d)
            throw DatasetError("sample " + std::to_string(i) + " has " +
                               std::to_string(s.features.size()) + " features, expected " +
                               std::to_string(d));
        for (double v : s.features)
            if (!std::isfinite(v))
                throw DatasetError("sample " + std::to_string(i) +
                                   " has a non-finite feature value");
        if (s.label < 0 || s.label >= n_labels())
            throw DatasetError("sample " + std::to_string(i) + " label index out of range");
        seen[static_cast<std::size_t>(s.label)] = true;
        if (s.subject_id.has_value() != want_subject)
            throw DatasetError("subject_id must be present on all samples or none");
        if (s.view.has_value() != has_views())
            throw DatasetError("view must be present on all samples or none");
        if (s.view && (*s.view < 0 || *s.view >= static_cast<int>(view_names.size())))
            throw DatasetError("sample " + std::to_string(i) + " view index out of range");
    }
    for (std::size_t l = 0; l < seen.size(); ++l)
        if (!seen[l])
            throw DatasetError("label '" + label_names[l] + "' has no samples");
}

FeatureDataset load_dataset(const std::string& path, const ColumnSchema& schema) {
    std::ifstream in(path);
    if (!in)
        throw IngestionError("cannot open dataset file: " + path);

    std::string header_line;
    if (!std::getline(in, header_line))
        throw IngestionError(path + ": file is empty");
    char delim = header_line.find('\t') != std::string::npos ? '\t' : ',';

    std::vector<std::string> header = split(header_line, delim);
    for (std::string& h : header)
        h = trim(h);

    const int label_idx = find_column(header, schema.label_col);
    if (label_idx < 0)
        throw SchemaError(path + ": missing label column '" + schema.label_col + "'");
    int subject_idx = -1;
    if (schema.subject_col) {
        subject_idx = find_column(header, *schema.subject_col);
        if (subject_idx < 0)
            throw SchemaError(path + ": missing subject column '" + *schema.subject_col + "'");
    }
    int view_idx = -1;
    if (schema.view_col) {
        view_idx = find_column(header, *schema.view_col);
        if (view_idx < 0)
            throw SchemaError(path + ": missing view column '" + *schema.view_col + "'");
    }

    std::vector<std::string> raw_lines;
    for (std::string line; std::getline(in, line);) {
        if (!trim(line).empty())
            raw_lines.push_back(line);
    }
    if (raw_lines.empty())
        throw DatasetError(path + ": no data rows");

    // Resolve feature columns.
    std::vector<int> feature_idx;
    std::vector<std::string> feature_names;
    if (schema.feature_cols) {
        for (const std::string& name : *schema.feature_cols) {
            int idx = find_column(header, name);
            if (idx < 0)
                throw SchemaError(path + ": missing feature column '" + name + "'");
            feature_idx.push_back(idx);
            feature_names.push_back(name);
        }
    } else {
        std::vector<std::string> probe = split(raw_lines.front(), delim);
        for (std::size_t i = 0; i < header.size(); ++i) {
            int ii = static_cast<int>(i);
            if (ii == label_idx || ii == subject_idx || ii == view_idx)
                continue;
            double v;
            if (i < probe.size() && parse_double(probe[i], v)) {
                feature_idx.push_back(ii);
                feature_names.push_back(header[i]);
            }
        }
    }
    if (feature_idx.empty())
        throw SchemaError(path + ": no feature columns found");

    // First pass: collect label and view name sets so indices are stable
    // under row permutation.
    struct RawRow {
        std::string label;
        std::string subject;
        std::string view;
        Vec features;
    };
    std::vector<RawRow> rows;
    std::set<std::string> label_set, view_set;
    for (std::size_t r = 0; r < raw_lines.size(); ++r) {
        const std::size_t line_no = r + 2; // header is line 1
        std::vector<std::string> cells = split(raw_lines[r], delim);
        RawRow row;
        auto cell_at = [&](int idx, const char* what) -> std::string {
            if (idx >= static_cast<int>(cells.size()))
                throw IngestionError(path + ":" + std::to_string(line_no) + ": missing " +
                                     what + " cell");
            return trim(cells[static_cast<std::size_t>(idx)]);
        };
        row.label = cell_at(label_idx, "label");
        if (row.label.empty())
            throw IngestionError(path + ":" + std::to_string(line_no) + ": blank label");
        label_set.insert(row.label);
        if (subject_idx >= 0) {
            row.subject = cell_at(subject_idx, "subject");
            if (row.subject.empty())
                throw IngestionError(path + ":" + std::to_string(line_no) + ": blank subject id");
        }
        if (view_idx >= 0) {
            row.view = cell_at(view_idx, "view");
            if (row.view.empty())
                throw IngestionError(path + ":" + std::to_string(line_no) + ": blank view");
            view_set.insert(row.view);
        }
        for (std::size_t f = 0; f < feature_idx.size(); ++f) {
            std::string cell = cell_at(feature_idx[f], "feature");
            double v;
            if (!parse_double(cell, v) || !std::isfinite(v))
                throw IngestionError(path + ":" + std::to_string(line_no) +
                                     ": non-numeric value '" + cell + "' in column '" +
                                     feature_names[f] + "'");
            row.features.push_back(v);
        }
        rows.push_back(std::move(row));
    }

    FeatureDataset ds;
    ds.feature_names = feature_names;
    ds.label_names.assign(label_set.begin(), label_set.end());
    ds.view_names.assign(view_set.begin(), view_set.end());
    std::map<std::string, int> label_of, view_of;
    for (std::size_t i = 0; i < ds.label_names.size(); ++i)
        label_of[ds.label_names[i]] = static_cast<int>(i);
    for (std::size_t i = 0; i < ds.view_names.size(); ++i)
        view_of[ds.view_names[i]] = static_cast<int>(i);

    for (RawRow& r : rows) {
        Sample s;
        s.features = std::move(r.features);
        s.label = label_of[r.label];
        if (subject_idx >= 0)
            s.subject_id = r.subject;
        if (view_idx >= 0)
            s.view = view_of[r.view];
        ds.samples.push_back(std::move(s));
    }
    ds.validate();
    return ds;
}

void save_dataset(const FeatureDataset& ds, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw ExportError("cannot open for writing: " + path);
    const bool subj = ds.has_subjects();
    const bool view = ds.has_views();
    if (subj)
        out << "subject,";
    if (view)
        out << "view,";
    out << "label";
    for (const std::string& f : ds.feature_names)
        out << ',' << f;
    out << '\n';
    for (const Sample& s : ds.samples) {
        if (subj)
            out << *s.subject_id << ',';
        if (view)
            out << ds.view_names[static_cast<std::size_t>(*s.view)] << ',';
        out << ds.label_names[static_cast<std::size_t>(s.label)];
        for (double v : s.features)
            out << ',' << fmt_double(v);
        out << '\n';
    }
    if (!out)
        throw ExportError("write failed: " + path);
}

std::pair<FeatureDataset, ScalingParams> standardize(const FeatureDataset& ds) {
    const std::size_t d = ds.dim();
    const std::size_t n = ds.size();
    ScalingParams p;
    p.mean.assign(d, 0.0);
    p.std_dev.assign(d, 1.0);
    p.constant.assign(d, false);

    for (std::size_t j = 0; j < d; ++j) {
        double lo = ds.samples[0].features[j], hi = lo, sum = 0.0;
        for (const Sample& s : ds.samples) {
            lo = std::min(lo, s.features[j]);
            hi = std::max(hi, s.features[j]);
            sum += s.features[j];
        }
        if (lo == hi) {
            p.constant[j] = true;
            continue;
        }
        double mean = sum / static_cast<double>(n);
        double var = 0.0;
        for (const Sample& s : ds.samples) {
            double dev = s.features[j] - mean;
            var += dev * dev;
        }
        p.mean[j] = mean;
        p.std_dev[j] = std::sqrt(var / static_cast<double>(n));
    }

    FeatureDataset out = ds;
    for (Sample& s : out.samples)
        for (std::size_t j = 0; j < d; ++j)
            if (!p.constant[j])
                s.features[j] = (s.features[j] - p.mean[j]) / p.std_dev[j];
    return {std::move(out), std::move(p)};
}

FeatureDataset unstandardize(const FeatureDataset& ds, const ScalingParams& p) {
    FeatureDataset out = ds;
    for (Sample& s : out.samples)
        for (std::size_t j = 0; j < ds.dim(); ++j)
            if (!p.constant[j])
                s.features[j] = s.features[j] * p.std_dev[j] + p.mean[j];
    return out;
}

FeatureDataset apply_scaling(const FeatureDataset& ds, const ScalingParams& p) {
    if (p.mean.size() != ds.dim())
        throw ShapeError("scaling parameters do not match the dataset dimension");
    FeatureDataset out = ds;
    for (Sample& s : out.samples)
        for (std::size_t j = 0; j < ds.dim(); ++j)
            if (!p.constant[j])
                s.features[j] = (s.features[j] - p.mean[j]) / p.std_dev[j];
    return out;
}

std::vector<FeatureDataset> split_by_view(const FeatureDataset& ds) {
    if (!ds.has_views())
        throw SchemaError("split_by_view requires a view column");
    std::vector<FeatureDataset> out(ds.view_names.size());
    for (std::size_t v = 0; v < ds.view_names.size(); ++v) {
        out[v].feature_names = ds.feature_names;
        out[v].label_names = ds.label_names;
        out[v].view_names = {ds.view_names[v]};
    }
    for (const Sample& s : ds.samples) {
        Sample copy = s;
        copy.view = 0;
        out[static_cast<std::size_t>(*s.view)].samples.push_back(std::move(copy));
    }
    return out;
}

FeatureDataset subset(const FeatureDataset& ds, const std::vector<int>& ids) {
    FeatureDataset out;
    out.feature_names = ds.feature_names;
    out.label_names = ds.label_names;
    out.view_names = ds.view_names;
    out.samples.reserve(ids.size());
    for (int id : ids)
        out.samples.push_back(ds.samples[static_cast<std::size_t>(id)]);
    return out;
}

} // namespace ficaug
