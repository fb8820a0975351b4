#include "ficaug/vecmath.hpp"

#include <cmath>

#include "ficaug/errors.hpp"

namespace ficaug {

double sq_dist(const Vec& a, const Vec& b) {
    if (a.size() != b.size())
        throw ShapeError("vector dimension mismatch: " + std::to_string(a.size()) +
                         " vs " + std::to_string(b.size()));
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

double euclid(const Vec& a, const Vec& b) { return std::sqrt(sq_dist(a, b)); }

Vec mean_point(const Rows& rows) {
    if (rows.empty())
        throw ShapeError("mean_point of empty row set");
    Vec m(rows.front().size(), 0.0);
    for (const Vec& r : rows)
        for (std::size_t j = 0; j < m.size(); ++j)
            m[j] += r[j];
    for (double& v : m)
        v /= static_cast<double>(rows.size());
    return m;
}

Vec feature_stds(const Rows& rows) {
    Vec m = mean_point(rows);
    Vec var(m.size(), 0.0);
    for (const Vec& r : rows)
        for (std::size_t j = 0; j < m.size(); ++j) {
            double d = r[j] - m[j];
            var[j] += d * d;
        }
    for (double& v : var)
        v = std::sqrt(v / static_cast<double>(rows.size()));
    return var;
}

double mean_of(const Vec& v) {
    double s = 0.0;
    for (double x : v)
        s += x;
    return s / static_cast<double>(v.size());
}

double population_std(const Vec& v) {
    double m = mean_of(v);
    double s = 0.0;
    for (double x : v) {
        double d = x - m;
        s += d * d;
    }
    return std::sqrt(s / static_cast<double>(v.size()));
}

} // namespace ficaug
