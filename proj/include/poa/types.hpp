#ifndef POA_TYPES_HPP
#define POA_TYPES_HPP

#include <type_traits>

#include <Eigen/Dense>

namespace poa {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Vectord = Vector<double>;
using Matrixd = Matrix<double>;

// Vector parameter whose scalar is fixed by another argument, so Eigen
// expressions convert instead of failing deduction.
template <typename Scalar>
using VectorIn = Vector<std::type_identity_t<Scalar>>;

// Largest absolute entry; zero for empty inputs.
template <typename Derived>
typename Derived::Scalar max_abs(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return typename Derived::Scalar(0);
  return m.cwiseAbs().maxCoeff();
}

}  // namespace poa

#endif  // POA_TYPES_HPP
