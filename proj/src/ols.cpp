#include "transitfit/ols.hpp"

#include <cmath>
#include <limits>

#include "transitfit/errors.hpp"
#include "transitfit/linreg.hpp"
#include "transitfit/student_t.hpp"

namespace transitfit {

double InferenceSpec::critical_for(bool is_intercept, Eigen::Index dof) const {
  if (mode == CriticalMode::fixed) {
    return is_intercept ? critical_intercept : critical_slope;
  }
  const double alpha = is_intercept ? alpha_intercept : alpha_slope;
  if (!(alpha > 0.0 && alpha < 1.0))
    throw InvalidInferenceError("significance level must lie in (0, 1)");
  if (dof < 1) throw InsufficientDataError("no residual degrees of freedom for inference");
  return student_t_quantile(1.0 - 0.5 * alpha, static_cast<double>(dof));
}

const CoefficientEstimate& FitResult::slope(const std::string& name) const {
  for (std::size_t j = 0; j < regressor_names.size(); ++j) {
    if (regressor_names[j] == name) return coefficients[j + 1];
  }
  throw SchemaError("no such regressor in fit: " + name);
}

CoefficientEstimate t_test(double estimate, double standard_error, double critical_value,
                           const std::string& name) {
  if (!(standard_error > 0.0))
    throw InvalidInferenceError("t_test: standard error must be positive" +
                                (name.empty() ? "" : " for " + name));
  if (!(critical_value > 0.0))
    throw InvalidInferenceError("t_test: critical value must be positive");
  CoefficientEstimate est;
  est.name = name;
  est.estimate = estimate;
  est.standard_error = standard_error;
  est.t_statistic = estimate / standard_error;
  est.critical_value = critical_value;
  est.significant = std::abs(est.t_statistic) >= critical_value;
  return est;
}

FitResult fit_ols(const ModelFrame& frame, const InferenceSpec& inference) {
  frame.validate();
  const Eigen::Index n = frame.n();
  const Eigen::Index k = frame.num_regressors() + 1;
  if (n <= k)
    throw InsufficientDataError("fit_ols: need n > k, have n = " + std::to_string(n) +
                                ", k = " + std::to_string(k));

  Eigen::MatrixXd design(n, k);
  design.col(0).setOnes();
  design.rightCols(k - 1) = frame.regressors;

  std::vector<std::string> names;
  names.reserve(k);
  names.emplace_back("Intercept");
  names.insert(names.end(), frame.regressor_names.begin(), frame.regressor_names.end());

  const LeastSquares<double> ls = least_squares(design, frame.response, &names);

  FitResult fit;
  fit.response_name = frame.response_name;
  fit.regressor_names = frame.regressor_names;
  fit.rows = frame.rows;
  fit.source_rows = frame.source_rows;
  fit.xtx_inverse_diagonal = ls.xtx_inverse_diagonal;
  // Same accumulation order as predict(), so re-predicting the training
  // frame reproduces these values bit for bit.
  fit.fitted = Eigen::VectorXd::Constant(n, ls.coefficients(0));
  for (Eigen::Index j = 1; j < k; ++j)
    fit.fitted += ls.coefficients(j) * frame.regressors.col(j - 1);

  fit.diagnostics.residuals = frame.response - fit.fitted;
  fit.diagnostics.n = n;
  fit.diagnostics.k = k;
  const double sse = fit.diagnostics.residuals.squaredNorm();
  const double sigma2 = sse / static_cast<double>(n - k);
  fit.diagnostics.adjusted_r_squared = adjusted_r_squared(frame.response, fit.fitted, k);
  fit.diagnostics.mae = mae(frame.response, fit.fitted);
  fit.diagnostics.rmse = rmse(frame.response, fit.fitted);

  for (Eigen::Index j = 0; j < k; ++j) {
    const double se = std::sqrt(sigma2 * ls.xtx_inverse_diagonal(j));
    const double critical = inference.critical_for(j == 0, n - k);
    if (se > 0.0) {
      fit.coefficients.push_back(t_test(ls.coefficients(j), se, critical, names[j]));
    } else {
      // Exact fit: zero residual variance. Report the coefficient with a
      // zero standard error and no significance decision machinery.
      CoefficientEstimate est;
      est.name = names[j];
      est.estimate = ls.coefficients(j);
      est.standard_error = 0.0;
      est.t_statistic = std::numeric_limits<double>::infinity();
      est.critical_value = critical;
      est.significant = est.estimate != 0.0;
      fit.coefficients.push_back(est);
    }
  }
  return fit;
}

Eigen::VectorXd predict(const FitResult& fit, const ModelFrame& frame) {
  if (frame.regressor_names != fit.regressor_names) {
    std::string want, have;
    for (const auto& s : fit.regressor_names) want += (want.empty() ? "" : ",") + s;
    for (const auto& s : frame.regressor_names) have += (have.empty() ? "" : ",") + s;
    throw SchemaError("predict: frame regressors [" + have + "] do not match fit [" + want + "]");
  }
  frame.validate();
  Eigen::VectorXd yhat =
      Eigen::VectorXd::Constant(frame.n(), fit.coefficients[0].estimate);
  for (Eigen::Index j = 0; j < frame.num_regressors(); ++j) {
    yhat += fit.coefficients[j + 1].estimate * frame.regressors.col(j);
  }
  return yhat;
}

}  // namespace transitfit
