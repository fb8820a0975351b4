#pragma once

namespace ficaug {

double log_beta(double a, double b);

// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double betainc_reg(double a, double b, double x);

// Two-sided p-value of a Student-t statistic with nu degrees of freedom.
double student_t_two_sided_p(double t, double nu);

// Survival function of the F distribution: P(F(d1, d2) > w).
double f_sf(double w, double d1, double d2);

// Survival function of the Kolmogorov distribution,
// Q(t) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 t^2).
double kolmogorov_sf(double t);

} // namespace ficaug
