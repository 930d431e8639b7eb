#ifndef POA_EQUILIBRIUM_HPP
#define POA_EQUILIBRIUM_HPP

#include <cstddef>
#include <utility>

#include "poa/demand_model.hpp"
#include "poa/spectral_kernel.hpp"

namespace poa {

/// Finite price vector. Negative prices are allowed: the optimization is
/// over all of R^N.
template <typename Scalar>
class PriceVector {
 public:
  explicit PriceVector(Vector<Scalar> p) : p_(std::move(p)) {
    if (!p_.allFinite()) throw Error(ErrorCode::NonFiniteEntry, "price vector");
  }
  const Vector<Scalar>& values() const { return p_; }
  Eigen::Index size() const { return p_.size(); }
  Scalar operator[](Eigen::Index i) const { return p_(i); }

 private:
  Vector<Scalar> p_;
};

template <typename Scalar>
struct PricedOutcome {
  PriceVector<Scalar> prices;
  Scalar revenue;
};

template <typename Scalar>
struct EquilibriumPair {
  PriceVector<Scalar> p_star;
  PriceVector<Scalar> p_ne;
  Scalar r_star;
  Scalar r_ne;
};

namespace detail {

inline void check_index(Eigen::Index i, Eigen::Index n) {
  if (i < 0 || i >= n) {
    throw Error(ErrorCode::IndexOutOfRange, "player index outside [0, N)",
                static_cast<std::size_t>(i < 0 ? 0 : i));
  }
}

template <typename Scalar>
void check_length(const Vector<Scalar>& p, Eigen::Index n) {
  if (p.size() != n) throw Error(ErrorCode::DimensionMismatch, "price vector length differs from N");
}

}  // namespace detail

/// R(p) = a^T p + p^T B p.
template <typename Scalar>
Scalar total_revenue(const DemandSystem<Scalar>& s, const VectorIn<Scalar>& p) {
  detail::check_length(p, s.n());
  return s.a().dot(p) + p.dot(s.b() * p);
}

template <typename Scalar>
Scalar total_revenue(const DemandSystem<Scalar>& s, const PriceVector<Scalar>& p) {
  return total_revenue(s, p.values());
}

/// u_i(p) = p_i (a_i + sum_j b_ij p_j).
template <typename Scalar>
Scalar player_payoff(const DemandSystem<Scalar>& s, const VectorIn<Scalar>& p, Eigen::Index i) {
  detail::check_length(p, s.n());
  detail::check_index(i, s.n());
  return p(i) * (s.a()(i) + s.b().row(i).dot(p));
}

/// Best response of player i to opponents' prices. p_others has length
/// N-1 and lists the opponents in index order with slot i removed.
template <typename Scalar>
Scalar best_response(const DemandSystem<Scalar>& s, const VectorIn<Scalar>& p_others, Eigen::Index i) {
  detail::check_index(i, s.n());
  if (p_others.size() != s.n() - 1) {
    throw Error(ErrorCode::DimensionMismatch, "opponent price vector must have length N-1");
  }
  Scalar cross(0);
  for (Eigen::Index j = 0, k = 0; j < s.n(); ++j) {
    if (j == i) continue;
    cross += s.b()(i, j) * p_others(k++);
  }
  return (-s.a()(i) - cross) / (Scalar(2) * s.b()(i, i));
}

/// Best response of player i reading opponents from a full profile; p(i)
/// itself is ignored.
template <typename Scalar>
Scalar best_response_in_profile(const DemandSystem<Scalar>& s, const VectorIn<Scalar>& p,
                                Eigen::Index i) {
  detail::check_length(p, s.n());
  detail::check_index(i, s.n());
  const Scalar cross = s.b().row(i).dot(p) - s.b()(i, i) * p(i);
  return (-s.a()(i) - cross) / (Scalar(2) * s.b()(i, i));
}

/// A^NE: B with its diagonal doubled.
template <typename Scalar>
Matrix<Scalar> build_ane(const DemandSystem<Scalar>& s) {
  Matrix<Scalar> ane = s.b();
  ane.diagonal() *= Scalar(2);
  return ane;
}

/// p* = -B^{-1} a / 2, solved as 2 H p* = a with H = -B.
template <typename Scalar>
PricedOutcome<Scalar> centralized_optimum(const DemandSystem<Scalar>& s) {
  const Matrix<Scalar> two_h = Scalar(-2) * s.b();
  PriceVector<Scalar> p(solve_spd(two_h, s.a()));
  const Scalar r = total_revenue(s, p);
  return {std::move(p), r};
}

/// p^NE = -(A^NE)^{-1} a, solved as G p = a with G = -A^NE.
template <typename Scalar>
PricedOutcome<Scalar> nash_equilibrium(const DemandSystem<Scalar>& s) {
  const Matrix<Scalar> g = -build_ane(s);
  PriceVector<Scalar> p(solve_spd(g, s.a()));
  const Scalar r = total_revenue(s, p);
  return {std::move(p), r};
}

template <typename Scalar>
EquilibriumPair<Scalar> equilibrium_pair(const DemandSystem<Scalar>& s) {
  auto opt = centralized_optimum(s);
  auto ne = nash_equilibrium(s);
  return {std::move(opt.prices), std::move(ne.prices), opt.revenue, ne.revenue};
}

}  // namespace poa

#endif  // POA_EQUILIBRIUM_HPP
