#pragma once

#include <vector>

namespace ficaug {

using Vec = std::vector<double>;
using Rows = std::vector<Vec>;

double sq_dist(const Vec& a, const Vec& b);
double euclid(const Vec& a, const Vec& b);

// column-wise mean of a row set
Vec mean_point(const Rows& rows);

// column-wise population standard deviation
Vec feature_stds(const Rows& rows);

double mean_of(const Vec& v);
double population_std(const Vec& v);

} // namespace ficaug
