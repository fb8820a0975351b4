#include "ficaug/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "ficaug/errors.hpp"
#include "ficaug/rng.hpp"
#include "ficaug/specfun.hpp"

namespace ficaug {

namespace {

double sample_variance(const Vec& v, double mean) {
    double s = 0.0;
    for (double x : v) {
        double d = x - mean;
        s += d * d;
    }
    return s / static_cast<double>(v.size() - 1);
}

} // namespace

double t_test(const Vec& a, const Vec& b) {
    if (a.size() < 2 || b.size() < 2)
        throw ArgumentError("t-test needs at least 2 values per sample");
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    const double ma = mean_of(a), mb = mean_of(b);
    const double va = sample_variance(a, ma), vb = sample_variance(b, mb);
    const double se2 = va / na + vb / nb;
    if (se2 == 0.0)
        return ma == mb ? 1.0 : 0.0;
    const double t = (ma - mb) / std::sqrt(se2);
    const double nu =
        se2 * se2 / (va * va / (na * na * (na - 1.0)) + vb * vb / (nb * nb * (nb - 1.0)));
    return student_t_two_sided_p(t, nu);
}

double levene_test(const Vec& a, const Vec& b) {
    if (a.size() < 2 || b.size() < 2)
        throw ArgumentError("Levene test needs at least 2 values per sample");
    const double ma = mean_of(a), mb = mean_of(b);
    Vec za, zb;
    za.reserve(a.size());
    zb.reserve(b.size());
    for (double x : a)
        za.push_back(std::fabs(x - ma));
    for (double x : b)
        zb.push_back(std::fabs(x - mb));
    const double mza = mean_of(za), mzb = mean_of(zb);
    const double n = static_cast<double>(a.size() + b.size());
    const double zbar =
        (mza * static_cast<double>(a.size()) + mzb * static_cast<double>(b.size())) / n;

    double num = static_cast<double>(a.size()) * (mza - zbar) * (mza - zbar) +
                 static_cast<double>(b.size()) * (mzb - zbar) * (mzb - zbar);
    double den_a = 0.0, den_b = 0.0; // per-group accumulation keeps p(a,b) == p(b,a) exact
    for (double z : za)
        den_a += (z - mza) * (z - mza);
    for (double z : zb)
        den_b += (z - mzb) * (z - mzb);
    const double den = den_a + den_b;

    if (den == 0.0)
        return num == 0.0 ? 1.0 : 0.0;
    const double w = (n - 2.0) * num / den;
    return f_sf(w, 1.0, n - 2.0);
}

double ks_statistic(const Vec& a, const Vec& b) {
    if (a.empty() || b.empty())
        throw ArgumentError("KS test needs non-empty samples");
    Vec sa = a, sb = b;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    Vec merged = sa;
    merged.insert(merged.end(), sb.begin(), sb.end());
    std::sort(merged.begin(), merged.end());
    double d = 0.0;
    for (double v : merged) {
        double fa = static_cast<double>(std::upper_bound(sa.begin(), sa.end(), v) - sa.begin()) /
                    static_cast<double>(sa.size());
        double fb = static_cast<double>(std::upper_bound(sb.begin(), sb.end(), v) - sb.begin()) /
                    static_cast<double>(sb.size());
        d = std::max(d, std::fabs(fa - fb));
    }
    return d;
}

double ks_test(const Vec& a, const Vec& b) {
    const double d = ks_statistic(a, b);
    const double en = static_cast<double>(a.size()) * static_cast<double>(b.size()) /
                      static_cast<double>(a.size() + b.size());
    return kolmogorov_sf(std::sqrt(en) * d);
}

TestReport similarity_report(const FeatureDataset& real, const SyntheticBatch& synth,
                             int n_per_side, std::uint64_t seed) {
    if (n_per_side < 2)
        throw ArgumentError("n_per_side must be at least 2");

    // ids per class on both sides
    std::vector<std::vector<int>> real_ids(real.label_names.size());
    for (std::size_t i = 0; i < real.size(); ++i)
        real_ids[static_cast<std::size_t>(real.samples[i].label)].push_back(
            static_cast<int>(i));
    std::vector<std::vector<int>> synth_ids(real.label_names.size());
    for (std::size_t i = 0; i < synth.size(); ++i)
        synth_ids[static_cast<std::size_t>(synth.labels[i])].push_back(static_cast<int>(i));

    for (std::size_t l = 0; l < real.label_names.size(); ++l) {
        if (real_ids[l].size() < static_cast<std::size_t>(n_per_side))
            throw ReportError("class '" + real.label_names[l] + "' has " +
                              std::to_string(real_ids[l].size()) +
                              " real samples, need n_per_side=" + std::to_string(n_per_side));
        if (synth_ids[l].size() < static_cast<std::size_t>(n_per_side))
            throw ReportError("class '" + real.label_names[l] + "' has " +
                              std::to_string(synth_ids[l].size()) +
                              " synthetic samples, need n_per_side=" +
                              std::to_string(n_per_side));
    }

    // Use the same derived stream for both sides of a class: when the two
    // datasets are identical the chosen subsets are too, making the report
    // an exact self-comparison.
    for (std::size_t l = 0; l < real.label_names.size(); ++l) {
        Rng ra(derive_seed(seed, "subsample-" + std::to_string(l)));
        ra.shuffle(real_ids[l]);
        Rng rb(derive_seed(seed, "subsample-" + std::to_string(l)));
        rb.shuffle(synth_ids[l]);
        real_ids[l].resize(static_cast<std::size_t>(n_per_side));
        synth_ids[l].resize(static_cast<std::size_t>(n_per_side));
    }

    TestReport report;
    report.n_per_side = n_per_side;
    int pass_t = 0, pass_l = 0, pass_k = 0;
    for (std::size_t f = 0; f < real.dim(); ++f) {
        for (std::size_t l = 0; l < real.label_names.size(); ++l) {
            Vec a, b;
            for (int id : real_ids[l])
                a.push_back(real.samples[static_cast<std::size_t>(id)].features[f]);
            for (int id : synth_ids[l])
                b.push_back(synth.points[static_cast<std::size_t>(id)][f]);
            TestReport::Row row;
            row.feature = real.feature_names[f];
            row.label = real.label_names[l];
            row.p_t = t_test(a, b);
            row.p_levene = levene_test(a, b);
            row.p_ks = ks_test(a, b);
            pass_t += row.p_t > 0.05;
            pass_l += row.p_levene > 0.05;
            pass_k += row.p_ks > 0.05;
            report.rows.push_back(std::move(row));
        }
    }
    const double n_rows = static_cast<double>(report.rows.size());
    report.pass_t = pass_t / n_rows;
    report.pass_levene = pass_l / n_rows;
    report.pass_ks = pass_k / n_rows;
    report.pass_fraction = (pass_t + pass_l + pass_k) / (3.0 * n_rows);
    return report;
}

std::string render_report(const TestReport& report) {
    std::ostringstream out;
    out << "feature\tclass\tp_t\tp_levene\tp_ks\n";
    char buf[128];
    for (const auto& row : report.rows) {
        std::snprintf(buf, sizeof(buf), "%s\t%s\t%.4f\t%.4f\t%.4f\n", row.feature.c_str(),
                      row.label.c_str(), row.p_t, row.p_levene, row.p_ks);
        out << buf;
    }
    std::snprintf(buf, sizeof(buf),
                  "pass_fraction(p>0.05): t=%.4f levene=%.4f ks=%.4f overall=%.4f "
                  "(n_per_side=%d)\n",
                  report.pass_t, report.pass_levene, report.pass_ks, report.pass_fraction,
                  report.n_per_side);
    out << buf;
    return out.str();
}

} // namespace ficaug
