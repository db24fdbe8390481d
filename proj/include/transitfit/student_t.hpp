#pragma once

namespace transitfit {

/// Regularized incomplete beta function I_x(a, b) for a, b > 0, x in [0, 1].
double incomplete_beta(double a, double b, double x);

/// CDF of Student's t distribution with `dof` degrees of freedom.
double student_t_cdf(double t, double dof);

/// Quantile (inverse CDF) for p in (0, 1); throws InvalidInferenceError on
/// out-of-range p or dof <= 0.
double student_t_quantile(double p, double dof);

}  // namespace transitfit
