#ifndef POA_DYNAMICS_HPP
#define POA_DYNAMICS_HPP

// Decentralized learning dynamics for the pricing game.
//
// Simultaneous best response iterates p <- T p + c with
// T_ij = -b_ij / (2 b_ii) (i != j). Its absolute row sums are mu_i / 2,
// so it is an infinity-norm contraction with factor at most mu / 2.
// Gradient play iterates p <- p + eta (a + A^NE p); its iteration matrix
// I + eta A^NE is stable for eta <= eta_max by Gershgorin on A^NE.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "poa/demand_model.hpp"
#include "poa/equilibrium.hpp"

namespace poa {

inline constexpr double kDefaultDynamicsEps = 1e-10;
inline constexpr long kDefaultMaxIters = 10'000;
/// Trajectories longer than this are thinned geometrically.
inline constexpr long kFullTrajectoryLimit = 1'000;

/// Raw iterate sequence of a dynamic, without any reference to p^NE.
template <typename Scalar>
struct PricePath {
  std::vector<Vector<Scalar>> iterates;  // iterates[t] is p^t
  bool converged = false;
  long steps = 0;
};

template <typename Scalar>
struct TrajectoryRecord {
  std::vector<PriceVector<Scalar>> iterates;
  /// Step number of each kept iterate. Equals 0..steps unless the
  /// trajectory was thinned.
  std::vector<long> step_index;
  std::vector<Scalar> dist_to_ne;  // infinity norm
  std::vector<Scalar> revenues;
  bool converged = false;
  long steps = 0;
};

template <typename Scalar>
Matrix<Scalar> best_response_iteration_matrix(const DemandSystem<Scalar>& s) {
  Matrix<Scalar> t(s.n(), s.n());
  for (Eigen::Index i = 0; i < s.n(); ++i) {
    for (Eigen::Index j = 0; j < s.n(); ++j) {
      t(i, j) = i == j ? Scalar(0) : -s.b()(i, j) / (Scalar(2) * s.b()(i, i));
    }
  }
  return t;
}

/// Largest absolute row sum of the best-response iteration matrix.
template <typename Scalar>
Scalar best_response_contraction_factor(const DemandSystem<Scalar>& s) {
  return best_response_iteration_matrix(s).cwiseAbs().rowwise().sum().maxCoeff();
}

/// 1 / (2 max_i |b_ii| (1 + mu)).
template <typename Scalar>
Scalar eta_max(const DemandSystem<Scalar>& s) {
  const auto prof = dominance_profile(s);
  return Scalar(1) / (Scalar(2) * prof.d.maxCoeff() * (Scalar(1) + prof.mu));
}

template <typename Scalar>
Matrix<Scalar> gradient_iteration_matrix(const DemandSystem<Scalar>& s, Scalar eta) {
  return Matrix<Scalar>::Identity(s.n(), s.n()) + eta * build_ane(s);
}

namespace detail {

template <typename Scalar, typename Step>
PricePath<Scalar> iterate_until_stationary(const Vector<Scalar>& p0, long max_iters, Scalar eps,
                                           Step&& step) {
  PricePath<Scalar> path;
  path.iterates.push_back(p0);
  Vector<Scalar> p = p0;
  for (long t = 0; t < max_iters; ++t) {
    Vector<Scalar> next = step(p);
    const Scalar move = (next - p).cwiseAbs().maxCoeff();
    path.iterates.push_back(next);
    path.steps = t + 1;
    p = std::move(next);
    if (!std::isfinite(static_cast<double>(move))) break;
    if (move <= eps) {
      path.converged = true;
      break;
    }
  }
  return path;
}

template <typename Scalar>
void check_dynamics_args(const DemandSystem<Scalar>& s, const VectorIn<Scalar>& p0, Scalar eps) {
  if (p0.size() != s.n()) throw Error(ErrorCode::DimensionMismatch, "p0 length differs from N");
  if (!p0.allFinite()) throw Error(ErrorCode::NonFiniteEntry, "p0");
  if (!(eps > Scalar(0))) throw Error(ErrorCode::SpecInvalid, "eps must be positive");
}

}  // namespace detail

/// Every player simultaneously best-responds to the previous profile.
/// Stops once the infinity-norm move is at most eps.
template <typename Scalar>
PricePath<Scalar> simulate_best_response(const DemandSystem<Scalar>& s, const VectorIn<Scalar>& p0,
                                         long max_iters, Scalar eps) {
  detail::check_dynamics_args(s, p0, eps);
  return detail::iterate_until_stationary<Scalar>(p0, max_iters, eps, [&](const Vector<Scalar>& p) {
    Vector<Scalar> next(p.size());
    for (Eigen::Index i = 0; i < p.size(); ++i) next(i) = best_response_in_profile(s, p, i);
    return next;
  });
}

/// Each player ascends its own payoff gradient
/// du_i/dp_i = a_i + 2 b_ii p_i + sum_{j != i} b_ij p_j.
template <typename Scalar>
PricePath<Scalar> simulate_gradient_play(const DemandSystem<Scalar>& s, const VectorIn<Scalar>& p0,
                                         Scalar eta, long max_iters, Scalar eps) {
  detail::check_dynamics_args(s, p0, eps);
  const Scalar limit = eta_max(s);
  if (!(eta > Scalar(0))) throw Error(ErrorCode::StepSizeTooLarge, "eta must be positive");
  if (eta > limit) {
    throw Error(ErrorCode::StepSizeTooLarge,
                "eta exceeds eta_max = " + std::to_string(static_cast<double>(limit)));
  }
  const Matrix<Scalar> ane = build_ane(s);
  return detail::iterate_until_stationary<Scalar>(p0, max_iters, eps, [&](const Vector<Scalar>& p) {
    return Vector<Scalar>(p + eta * (s.a() + ane * p));
  });
}

/// Indices kept when a path of `steps` updates is stored: all of them up
/// to kFullTrajectoryLimit, otherwise 0, round(1.01^k) and the last.
inline std::vector<long> thinned_step_indices(long steps) {
  std::vector<long> out;
  if (steps <= kFullTrajectoryLimit) {
    out.resize(static_cast<std::size_t>(steps + 1));
    for (long t = 0; t <= steps; ++t) out[static_cast<std::size_t>(t)] = t;
    return out;
  }
  std::set<long> keep{0, steps};
  for (double x = 1.0; x < static_cast<double>(steps); x *= 1.01) keep.insert(std::lround(x));
  return {keep.begin(), keep.end()};
}

template <typename Scalar>
TrajectoryRecord<Scalar> make_trajectory(const DemandSystem<Scalar>& s, const PricePath<Scalar>& path) {
  const Vector<Scalar> p_ne = nash_equilibrium(s).prices.values();
  TrajectoryRecord<Scalar> rec;
  rec.converged = path.converged;
  rec.steps = path.steps;
  for (long t : thinned_step_indices(path.steps)) {
    const Vector<Scalar>& p = path.iterates[static_cast<std::size_t>(t)];
    rec.step_index.push_back(t);
    rec.dist_to_ne.push_back((p - p_ne).cwiseAbs().maxCoeff());
    rec.revenues.push_back(total_revenue(s, p));
    rec.iterates.emplace_back(p);
  }
  return rec;
}

template <typename Scalar>
TrajectoryRecord<Scalar> best_response_dynamics(const DemandSystem<Scalar>& s, const VectorIn<Scalar>& p0,
                                                long max_iters = kDefaultMaxIters,
                                                Scalar eps = Scalar(kDefaultDynamicsEps)) {
  return make_trajectory(s, simulate_best_response(s, p0, max_iters, eps));
}

template <typename Scalar>
TrajectoryRecord<Scalar> gradient_play(const DemandSystem<Scalar>& s, const VectorIn<Scalar>& p0, Scalar eta,
                                       long max_iters = kDefaultMaxIters,
                                       Scalar eps = Scalar(kDefaultDynamicsEps)) {
  return make_trajectory(s, simulate_gradient_play(s, p0, eta, max_iters, eps));
}

}  // namespace poa

#endif  // POA_DYNAMICS_HPP
