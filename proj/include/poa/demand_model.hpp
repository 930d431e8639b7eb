#ifndef POA_DEMAND_MODEL_HPP
#define POA_DEMAND_MODEL_HPP

#include <cmath>
#include <cstddef>
#include <string>

#include "poa/errors.hpp"
#include "poa/spectral_kernel.hpp"
#include "poa/types.hpp"

namespace poa {

/// Linear expected-demand system F(p) = a + B p.
///
/// Construction goes through build_demand_system, which guarantees that
/// B is bitwise symmetric, has a strictly negative diagonal and is
/// strictly row diagonally dominant. Instances are immutable.
template <typename Scalar>
class DemandSystem {
 public:
  Eigen::Index n() const { return a_.size(); }
  const Vector<Scalar>& a() const { return a_; }
  const Matrix<Scalar>& b() const { return b_; }

  /// Same sensitivities with a different intercept. B is already
  /// validated; only the intercept length is checked.
  DemandSystem with_intercept(const Vector<Scalar>& a) const {
    if (a.size() != n()) {
      throw Error(ErrorCode::DimensionMismatch, "intercept length differs from N");
    }
    if (!a.allFinite()) throw Error(ErrorCode::NonFiniteEntry, "intercept");
    return DemandSystem(a, b_);
  }

 private:
  DemandSystem(Vector<Scalar> a, Matrix<Scalar> b) : a_(std::move(a)), b_(std::move(b)) {}

  template <typename S>
  friend DemandSystem<S> build_demand_system(const Vector<S>&, const Matrix<S>&, S);

  Vector<Scalar> a_;
  Matrix<Scalar> b_;
};

using DemandSystemd = DemandSystem<double>;

template <typename Scalar>
struct DominanceProfile {
  Vector<Scalar> d;         // own-effect magnitudes |b_ii|
  Vector<Scalar> mu_local;  // sum_{j != i} |b_ij| / d_i
  Scalar mu;                // max_i mu_local(i)
};

namespace detail {

template <typename Scalar>
Scalar off_diagonal_abs_row_sum(const Matrix<Scalar>& b, Eigen::Index i) {
  Scalar sum(0);
  for (Eigen::Index j = 0; j < b.cols(); ++j) {
    if (j != i) sum += std::abs(b(i, j));
  }
  return sum;
}

}  // namespace detail

/// Default relative asymmetry tolerance for build_demand_system.
inline constexpr double kDefaultSymmetryTol = 1e-12;

/// Validates (a, B) and returns a DemandSystem.
///
/// symmetry_tol is relative to max|b_ij|. Inputs within tolerance are
/// replaced by (B + B^T)/2, which leaves exactly symmetric inputs
/// untouched. Checks run in the order dimensions, finiteness, symmetry,
/// own effects, dominance; the first failure is reported with its row.
template <typename Scalar>
DemandSystem<Scalar> build_demand_system(const Vector<Scalar>& a, const Matrix<Scalar>& b,
                                         Scalar symmetry_tol = Scalar(kDefaultSymmetryTol)) {
  const Eigen::Index n = a.size();
  if (n == 0) throw Error(ErrorCode::DimensionMismatch, "empty demand system");
  if (b.rows() != b.cols()) throw Error(ErrorCode::DimensionMismatch, "B must be square");
  if (b.rows() != n) throw Error(ErrorCode::DimensionMismatch, "length of a differs from size of B");
  if (!a.allFinite() || !b.allFinite()) {
    throw Error(ErrorCode::NonFiniteEntry, "a and B must be finite");
  }

  const Scalar skew = asymmetry(b);
  if (skew > symmetry_tol * max_abs(b)) {
    throw Error(ErrorCode::AsymmetryExceedsTolerance,
                "max |b_ij - b_ji| exceeds symmetry tolerance");
  }
  Matrix<Scalar> sym = b;
  if (skew > Scalar(0)) sym = symmetrized(b);

  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(sym(i, i) < Scalar(0))) {
      throw Error(ErrorCode::NonNegativeOwnEffect, "b_ii must be negative",
                  static_cast<std::size_t>(i));
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(detail::off_diagonal_abs_row_sum(sym, i) < std::abs(sym(i, i)))) {
      throw Error(ErrorCode::DominanceViolated, "sum_{j!=i} |b_ij| must be below |b_ii|",
                  static_cast<std::size_t>(i));
    }
  }
  return DemandSystem<Scalar>(a, std::move(sym));
}

template <typename Scalar>
DominanceProfile<Scalar> dominance_profile(const DemandSystem<Scalar>& s) {
  const Eigen::Index n = s.n();
  DominanceProfile<Scalar> out{Vector<Scalar>(n), Vector<Scalar>(n), Scalar(0)};
  for (Eigen::Index i = 0; i < n; ++i) {
    out.d(i) = std::abs(s.b()(i, i));
    out.mu_local(i) = detail::off_diagonal_abs_row_sum(s.b(), i) / out.d(i);
  }
  out.mu = out.mu_local.maxCoeff();
  return out;
}

/// F(p) = a + B p.
template <typename Scalar>
Vector<Scalar> expected_demand(const DemandSystem<Scalar>& s, const VectorIn<Scalar>& p) {
  if (p.size() != s.n()) throw Error(ErrorCode::DimensionMismatch, "price vector length differs from N");
  return s.a() + s.b() * p;
}

/// Gershgorin discs [b_ii - r_i, b_ii + r_i]; the upper ends are all
/// negative for a valid system.
template <typename Scalar>
Vector<Scalar> gershgorin_upper_ends(const DemandSystem<Scalar>& s) {
  Vector<Scalar> out(s.n());
  for (Eigen::Index i = 0; i < s.n(); ++i) {
    out(i) = s.b()(i, i) + detail::off_diagonal_abs_row_sum(s.b(), i);
  }
  return out;
}

}  // namespace poa

#endif  // POA_DEMAND_MODEL_HPP
