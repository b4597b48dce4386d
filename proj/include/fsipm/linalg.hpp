#pragma once

#include <cmath>
#include <string>

#include <Eigen/Core>
#include <Eigen/SVD>

#include "fsipm/error.hpp"

namespace fsipm {

template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Index = Eigen::Index;

/// Singular values below this fraction of the largest count as zero.
template <typename Scalar>
constexpr Scalar kRankCutoff = Scalar(1e-10);

/// Lower-triangular Cholesky factor L of a symmetric positive definite M = L·Lᵀ.
template <typename Scalar>
class SpdFactor {
 public:
  SpdFactor() = default;
  explicit SpdFactor(Mat<Scalar> lower) : lower_{std::move(lower)} {}

  Index dimension() const { return lower_.rows(); }
  const Mat<Scalar>& lower() const { return lower_; }

  Mat<Scalar> reconstruct() const { return lower_ * lower_.transpose(); }

  /// Returns L⁻¹·rhs.
  template <typename Derived>
  auto forward(const Eigen::MatrixBase<Derived>& rhs) const {
    check_rows(rhs.rows());
    using Result = Eigen::Matrix<Scalar, Eigen::Dynamic,
                                 Derived::ColsAtCompileTime>;
    Result out = rhs;
    lower_.template triangularView<Eigen::Lower>().solveInPlace(out);
    return out;
  }

  /// Returns M⁻¹·rhs.
  template <typename Derived>
  auto solve(const Eigen::MatrixBase<Derived>& rhs) const {
    auto out = forward(rhs);
    lower_.transpose().template triangularView<Eigen::Upper>().solveInPlace(
        out);
    return out;
  }

  /// √(vᵀM⁻¹v)
  template <typename Derived>
  Scalar inverse_norm(const Eigen::MatrixBase<Derived>& v) const {
    return forward(v).norm();
  }

  /// √(vᵀMv)
  template <typename Derived>
  Scalar norm(const Eigen::MatrixBase<Derived>& v) const {
    check_rows(v.rows());
    return (lower_.transpose() * v).norm();
  }

 private:
  void check_rows(Index rows) const {
    if (rows != dimension()) {
      throw Error(ErrorKind::DimensionMismatch,
                  "right-hand side has " + std::to_string(rows) +
                      " rows, factor has dimension " +
                      std::to_string(dimension()));
    }
  }

  Mat<Scalar> lower_;
};

/// Cholesky factorization. Throws NotPositiveDefinite with the 1-based pivot
/// index at the first pivot that is not strictly positive and finite.
template <typename Derived>
SpdFactor<typename Derived::Scalar> cholesky(
    const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  using std::abs;
  using std::sqrt;
  const Index n = m.rows();
  if (m.cols() != n) {
    throw Error(ErrorKind::DimensionMismatch, "matrix is not square");
  }
  const Scalar scale = n > 0 ? m.cwiseAbs().maxCoeff() : Scalar(0);
  if (n > 0 && (m - m.transpose()).cwiseAbs().maxCoeff() >
                   Scalar(1e-12) * scale) {
    throw Error(ErrorKind::NotSymmetric, "matrix is not symmetric");
  }

  Mat<Scalar> l = Mat<Scalar>::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    Scalar pivot = m(j, j) - l.row(j).head(j).squaredNorm();
    if (!(pivot > Scalar(0)) || !std::isfinite(static_cast<double>(pivot))) {
      throw Error(ErrorKind::NotPositiveDefinite,
                  "non-positive pivot " + std::to_string(j + 1), j + 1);
    }
    const Scalar ljj = sqrt(pivot);
    l(j, j) = ljj;
    const Index rest = n - j - 1;
    if (rest > 0) {
      l.col(j).tail(rest) =
          (m.col(j).tail(rest) -
           l.bottomLeftCorner(rest, j) * l.row(j).head(j).transpose()) /
          ljj;
    }
  }
  return SpdFactor<Scalar>{std::move(l)};
}

template <typename Scalar, typename Derived>
auto solve_spd(const SpdFactor<Scalar>& factor,
               const Eigen::MatrixBase<Derived>& rhs) {
  return factor.solve(rhs);
}

/// Orthonormal basis Z of ker(B).
template <typename Scalar>
struct NullspaceBasis {
  Mat<Scalar> basis;
  Mat<Scalar> defining;

  Index ambient_dimension() const { return basis.rows(); }
  Index dimension() const { return basis.cols(); }
};

template <typename Scalar>
Index numerical_rank(const Mat<Scalar>& b) {
  if (b.rows() == 0 || b.cols() == 0) {
    return 0;
  }
  Eigen::JacobiSVD<Mat<Scalar>> svd(b);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == Scalar(0)) {
    return 0;
  }
  Index rank = 0;
  for (Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > kRankCutoff<Scalar> * sv(0)) {
      ++rank;
    }
  }
  return rank;
}

template <typename Scalar>
NullspaceBasis<Scalar> nullspace(const Mat<Scalar>& b) {
  const Index n = b.cols();
  if (n == 0) {
    throw Error(ErrorKind::DimensionMismatch, "matrix has no columns");
  }
  if (b.rows() == 0) {
    return {Mat<Scalar>::Identity(n, n), b};
  }
  Eigen::JacobiSVD<Mat<Scalar>> svd(b, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  Index rank = 0;
  if (sv.size() > 0 && sv(0) > Scalar(0)) {
    for (Index i = 0; i < sv.size(); ++i) {
      if (sv(i) > kRankCutoff<Scalar> * sv(0)) {
        ++rank;
      }
    }
  }
  return {svd.matrixV().rightCols(n - rank), b};
}

}  // namespace fsipm
