#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "transitfit/frame.hpp"
#include "transitfit/types.hpp"

namespace transitfit {

/// How critical values are chosen. The fixed defaults follow the common
/// reporting convention of 1.96 for the intercept and 1.65 for slopes; the
/// student_t mode derives them from the exact t quantile at n - k degrees of
/// freedom using the configured two-sided tail masses.
struct InferenceSpec {
  enum class CriticalMode { fixed, student_t };

  CriticalMode mode = CriticalMode::fixed;
  double critical_intercept = 1.96;
  double critical_slope = 1.65;
  double alpha_intercept = 0.05;  // two-sided tail mass, student_t mode
  double alpha_slope = 0.10;

  double critical_for(bool is_intercept, Eigen::Index dof) const;
};

struct CoefficientEstimate {
  std::string name;
  double estimate = 0.0;
  double standard_error = 0.0;
  double t_statistic = 0.0;
  double critical_value = 0.0;
  bool significant = false;
};

struct FitDiagnostics {
  double adjusted_r_squared = 0.0;
  double mae = 0.0;
  double rmse = 0.0;
  Eigen::Index n = 0;
  Eigen::Index k = 0;  // parameter count including the intercept
  Eigen::VectorXd residuals;
};

/// One estimated equation: intercept first, then one estimate per regressor,
/// plus diagnostics and fitted values aligned with `rows`.
struct FitResult {
  std::string response_name;
  std::vector<CoefficientEstimate> coefficients;
  FitDiagnostics diagnostics;
  Eigen::VectorXd fitted;
  std::vector<std::string> regressor_names;
  std::vector<RowId> rows;
  std::vector<std::size_t> source_rows;
  // Diagonal of (X^T X)^-1 for the training design; lets callers rescale
  // standard errors under an alternative residual variance.
  Eigen::VectorXd xtx_inverse_diagonal;

  const CoefficientEstimate& intercept() const { return coefficients.front(); }
  const CoefficientEstimate& slope(const std::string& name) const;
};

/// t = estimate / standard_error; significant iff |t| >= critical_value.
/// Throws InvalidInferenceError when standard_error <= 0.
CoefficientEstimate t_test(double estimate, double standard_error, double critical_value,
                           const std::string& name = {});

/// OLS with an implicit intercept column: coefficients by QR, classical
/// homoskedastic standard errors with denominator n - k, significance per
/// t_test, diagnostics (adjusted R^2, MAE, RMSE) over the training frame.
FitResult fit_ols(const ModelFrame& frame, const InferenceSpec& inference = {});

/// Fitted values of `fit` applied to a frame with matching regressor names.
Eigen::VectorXd predict(const FitResult& fit, const ModelFrame& frame);

}  // namespace transitfit
