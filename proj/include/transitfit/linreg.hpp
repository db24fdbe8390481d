#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "transitfit/errors.hpp"

namespace transitfit {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// Relative rank tolerance for the pivoted QR: a diagonal of R below
// kRankTolerance times the leading diagonal (the largest column norm)
// marks the design as rank deficient.
inline constexpr double kRankTolerance = 1e-10;

template <typename Scalar>
struct LeastSquares {
  VectorX<Scalar> coefficients;
  /// Diagonal of (X^T X)^-1 in original column order, computed from the
  /// triangular factor. Scaled by the residual variance this gives the
  /// squared standard errors.
  VectorX<Scalar> xtx_inverse_diagonal;
};

namespace detail {

inline std::string column_display(const std::vector<std::string>* names, Eigen::Index j) {
  if (names && j >= 0 && j < static_cast<Eigen::Index>(names->size())) return (*names)[j];
  return "column " + std::to_string(j);
}

}  // namespace detail

/// Least squares via column-pivoted Householder QR; never forms the normal
/// equations. Throws InsufficientDataError when n < k and CollinearityError
/// (naming the dependent column) when the design is numerically rank
/// deficient.
template <typename DerivedX, typename DerivedY>
LeastSquares<typename DerivedX::Scalar> least_squares(
    const Eigen::MatrixBase<DerivedX>& design, const Eigen::MatrixBase<DerivedY>& response,
    const std::vector<std::string>* column_names = nullptr) {
  using Scalar = typename DerivedX::Scalar;
  static_assert(std::is_same_v<Scalar, typename DerivedY::Scalar>,
                "design and response must share a scalar type");

  const Eigen::Index n = design.rows();
  const Eigen::Index k = design.cols();
  if (response.size() != n) throw ShapeError("response length does not match design rows");
  if (k < 1) throw ShapeError("design has no columns");
  if (n < k)
    throw InsufficientDataError("need at least " + std::to_string(k) + " observations, have " +
                                std::to_string(n));

  Eigen::ColPivHouseholderQR<MatrixX<Scalar>> qr(design);
  const auto r_diag = qr.matrixR().diagonal();
  const Scalar scale = std::abs(r_diag(0));
  const auto& perm = qr.colsPermutation().indices();
  if (scale == Scalar(0)) {
    throw CollinearityError(detail::column_display(column_names, perm(0)),
                            "design matrix is identically zero");
  }
  for (Eigen::Index i = 0; i < k; ++i) {
    if (std::abs(r_diag(i)) <= Scalar(kRankTolerance) * scale) {
      // perm(i) is the original index of the column pivoted to position i.
      const std::string name = detail::column_display(column_names, perm(i));
      throw CollinearityError(
          name, "design matrix is rank deficient: " + name +
                    " is linearly dependent on the preceding columns");
    }
  }

  LeastSquares<Scalar> out;
  out.coefficients = qr.solve(response.derived());

  // X P = Q R  =>  (X^T X)^-1 = P R^-1 R^-T P^T; row norms of R^-1 give the
  // pivoted diagonal, unscrambled through the permutation.
  MatrixX<Scalar> rinv = qr.matrixR()
                             .topLeftCorner(k, k)
                             .template triangularView<Eigen::Upper>()
                             .solve(MatrixX<Scalar>::Identity(k, k));
  out.xtx_inverse_diagonal.resize(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    out.xtx_inverse_diagonal(perm(i)) = rinv.row(i).squaredNorm();
  }
  return out;
}

/// Coefficient vector minimizing the sum of squared residuals.
template <typename DerivedX, typename DerivedY>
VectorX<typename DerivedX::Scalar> solve_least_squares(
    const Eigen::MatrixBase<DerivedX>& design, const Eigen::MatrixBase<DerivedY>& response,
    const std::vector<std::string>* column_names = nullptr) {
  return least_squares(design, response, column_names).coefficients;
}

/// Mean absolute error between observed and fitted values.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar mae(const Eigen::MatrixBase<DerivedA>& observed,
                              const Eigen::MatrixBase<DerivedB>& fitted) {
  if (observed.size() != fitted.size())
    throw ShapeError("mae: observed and fitted lengths differ");
  if (observed.size() == 0) throw ShapeError("mae: empty input");
  return (observed.derived() - fitted.derived()).cwiseAbs().mean();
}

/// Root mean squared error between observed and fitted values.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar rmse(const Eigen::MatrixBase<DerivedA>& observed,
                               const Eigen::MatrixBase<DerivedB>& fitted) {
  if (observed.size() != fitted.size())
    throw ShapeError("rmse: observed and fitted lengths differ");
  if (observed.size() == 0) throw ShapeError("rmse: empty input");
  using std::sqrt;
  return sqrt((observed.derived() - fitted.derived()).squaredNorm() /
              static_cast<typename DerivedA::Scalar>(observed.size()));
}

/// Adjusted coefficient of determination,
///   1 - (SSE / (n - k)) / (SST / (n - 1)),
/// with SST about the observed mean and k counting the intercept.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar adjusted_r_squared(const Eigen::MatrixBase<DerivedA>& observed,
                                             const Eigen::MatrixBase<DerivedB>& fitted,
                                             Eigen::Index k) {
  using Scalar = typename DerivedA::Scalar;
  const Eigen::Index n = observed.size();
  if (fitted.size() != n)
    throw ShapeError("adjusted_r_squared: observed and fitted lengths differ");
  if (n <= k)
    throw InsufficientDataError("adjusted_r_squared: need n > k, have n = " + std::to_string(n) +
                                ", k = " + std::to_string(k));
  if (n <= 1) throw InsufficientDataError("adjusted_r_squared: need n > 1");

  const Scalar mean = observed.derived().mean();
  const Scalar sst = (observed.derived().array() - mean).matrix().squaredNorm();
  if (sst == Scalar(0))
    throw DegenerateVarianceError("adjusted_r_squared: observed values are constant");
  const Scalar sse = (observed.derived() - fitted.derived()).squaredNorm();
  return Scalar(1) - (sse / static_cast<Scalar>(n - k)) / (sst / static_cast<Scalar>(n - 1));
}

}  // namespace transitfit
