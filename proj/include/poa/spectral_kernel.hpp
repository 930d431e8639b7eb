#ifndef POA_SPECTRAL_KERNEL_HPP
#define POA_SPECTRAL_KERNEL_HPP

// Dense symmetric primitives: eigendecomposition, SPD square roots and
// solves. Everything downstream goes through these so tolerances and
// sign conventions live in one place.

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "poa/errors.hpp"
#include "poa/types.hpp"

namespace poa {

template <typename Scalar>
struct KernelTolerance {
  /// Absolute tolerance on unit-scaled matrices.
  static Scalar kernel() { return Scalar(1e-10); }
  /// Eigenvalues at or below pd_floor * lambda_max are treated as non-positive.
  static Scalar pd_floor() { return Scalar(1e-12); }
};

template <typename Scalar>
struct SymmetricEigen {
  Vector<Scalar> eigenvalues;   // ascending
  Matrix<Scalar> eigenvectors;  // orthonormal columns
};

template <typename Derived>
typename Derived::Scalar asymmetry(const Eigen::MatrixBase<Derived>& m) {
  return max_abs(m - m.transpose());
}

template <typename Derived>
Matrix<typename Derived::Scalar> symmetrized(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  return (m + m.transpose()) * Scalar(0.5);
}

/// Full symmetric eigendecomposition, eigenvalues ascending.
///
/// Each eigenvector is normalized so that its first component with
/// magnitude above 1e-10 is positive, which makes the output a
/// deterministic function of the input.
template <typename Derived>
SymmetricEigen<typename Derived::Scalar> eig_sym(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  using std::max;
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "eig_sym expects a square matrix");
  }
  const Scalar scale = max(Scalar(1), max_abs(m));
  if (asymmetry(m) > KernelTolerance<Scalar>::kernel() * scale) {
    throw Error(ErrorCode::NotSymmetric, "eig_sym input is not symmetric");
  }
  const Matrix<Scalar> sym = symmetrized(m);
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::NotSymmetric, "symmetric eigensolver did not converge");
  }
  SymmetricEigen<Scalar> out{solver.eigenvalues(), solver.eigenvectors()};
  const Scalar sign_threshold(1e-10);
  for (Eigen::Index c = 0; c < out.eigenvectors.cols(); ++c) {
    for (Eigen::Index r = 0; r < out.eigenvectors.rows(); ++r) {
      const Scalar v = out.eigenvectors(r, c);
      if (std::abs(v) > sign_threshold) {
        if (v < Scalar(0)) out.eigenvectors.col(c) *= Scalar(-1);
        break;
      }
    }
  }
  return out;
}

namespace detail {

template <typename Scalar>
void require_positive_spectrum(const Vector<Scalar>& eigenvalues) {
  using std::max;
  const Scalar top = eigenvalues.size() ? eigenvalues.maxCoeff() : Scalar(0);
  const Scalar floor = KernelTolerance<Scalar>::pd_floor() * max(top, Scalar(0));
  if (eigenvalues.size() == 0 || eigenvalues.minCoeff() <= floor) {
    throw Error(ErrorCode::NotPositiveDefinite, "smallest eigenvalue is at or below pd_floor");
  }
}

template <typename Scalar, typename Fn>
Matrix<Scalar> spectral_function(const SymmetricEigen<Scalar>& e, Fn&& fn) {
  const Vector<Scalar> mapped = e.eigenvalues.unaryExpr(fn);
  const Matrix<Scalar> out = e.eigenvectors * mapped.asDiagonal() * e.eigenvectors.transpose();
  return symmetrized(out);
}

}  // namespace detail

/// Unique symmetric positive definite square root Q diag(sqrt(lambda)) Q^T.
template <typename Derived>
Matrix<typename Derived::Scalar> spd_sqrt(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  const auto e = eig_sym(m);
  detail::require_positive_spectrum(e.eigenvalues);
  return detail::spectral_function(e, [](Scalar x) { using std::sqrt; return sqrt(x); });
}

/// Inverse of the SPD square root, from the same eigendecomposition.
template <typename Derived>
Matrix<typename Derived::Scalar> spd_inv_sqrt(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  const auto e = eig_sym(m);
  detail::require_positive_spectrum(e.eigenvalues);
  return detail::spectral_function(e, [](Scalar x) { using std::sqrt; return Scalar(1) / sqrt(x); });
}

namespace detail {

template <typename Derived>
Eigen::LLT<Matrix<typename Derived::Scalar>> spd_factor(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  using std::max;
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "expected a square matrix");
  }
  if (asymmetry(m) > KernelTolerance<Scalar>::kernel() * max(Scalar(1), max_abs(m))) {
    throw Error(ErrorCode::NotSymmetric, "SPD factorization input is not symmetric");
  }
  Eigen::LLT<Matrix<Scalar>> llt(symmetrized(m));
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::NotPositiveDefinite, "Cholesky factorization failed");
  }
  const Vector<Scalar> diag = llt.matrixL().toDenseMatrix().diagonal();
  const Scalar lo = diag.minCoeff();
  const Scalar hi = diag.maxCoeff();
  // diag(L)^2 brackets the spectrum loosely; reject numerically singular factors.
  if (!(lo * lo > KernelTolerance<Scalar>::pd_floor() * hi * hi)) {
    throw Error(ErrorCode::NotPositiveDefinite, "Cholesky factor is numerically singular");
  }
  return llt;
}

}  // namespace detail

/// Solves m x = rhs for symmetric positive definite m by Cholesky.
template <typename DerivedM, typename DerivedR>
Vector<typename DerivedM::Scalar> solve_spd(const Eigen::MatrixBase<DerivedM>& m,
                                            const Eigen::MatrixBase<DerivedR>& rhs) {
  if (rhs.rows() != m.rows() || rhs.cols() != 1) {
    throw Error(ErrorCode::DimensionMismatch, "solve_spd right-hand side has wrong length");
  }
  return detail::spd_factor(m).solve(rhs);
}

/// Explicit inverse of an SPD matrix. Only used where a matrix-valued
/// formula needs the inverse itself; prefer solve_spd for vectors.
template <typename Derived>
Matrix<typename Derived::Scalar> spd_inverse(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  const auto llt = detail::spd_factor(m);
  const Matrix<Scalar> inv = llt.solve(Matrix<Scalar>::Identity(m.rows(), m.cols()));
  return symmetrized(inv);
}

}  // namespace poa

#endif  // POA_SPECTRAL_KERNEL_HPP
