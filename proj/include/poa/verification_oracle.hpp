#ifndef POA_VERIFICATION_ORACLE_HPP
#define POA_VERIFICATION_ORACLE_HPP

// Brute-force checks of the closed forms. The oracles reach their answer
// by generic means (line-searched ascent, best-response iteration with a
// deviation sweep, random search on the Rayleigh quotient) and only call
// the closed-form routines at the end to measure the discrepancy.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Cholesky>

#include "poa/demand_model.hpp"
#include "poa/dynamics.hpp"
#include "poa/equilibrium.hpp"
#include "poa/instance_factory.hpp"
#include "poa/poa_analysis.hpp"

namespace poa {

enum class OracleQuantity { centralized_revenue, nash_prices, poa_min_sampled };

constexpr std::string_view to_string(OracleQuantity q) {
  switch (q) {
    case OracleQuantity::centralized_revenue: return "centralized_revenue";
    case OracleQuantity::nash_prices: return "nash_prices";
    case OracleQuantity::poa_min_sampled: return "poa_min_sampled";
  }
  return "unknown";
}

template <typename Scalar>
struct OracleResult {
  OracleQuantity quantity;
  Vector<Scalar> value;  // length 1 for scalar quantities
  Scalar discrepancy;
  Scalar tolerance;
  bool passed;
  std::string note;
};

inline constexpr long kDefaultAscentIters = 20'000;
inline constexpr long kDefaultOracleSamples = 1'000;

/// Gradient ascent on R(p) = a^T p + p^T B p from p = 0 with backtracking
/// (halving, Armijo constant 1e-4). Discrepancy is
/// |R_ascent - R(p*)| / max(1, R(p*)).
template <typename Scalar>
OracleResult<Scalar> oracle_centralized(const DemandSystem<Scalar>& s,
                                        long iters = kDefaultAscentIters,
                                        Scalar tolerance = Scalar(1e-6)) {
  using std::abs;
  using std::max;
  using std::sqrt;
  const auto revenue = [&](const Vector<Scalar>& p) { return s.a().dot(p) + p.dot(s.b() * p); };
  const Scalar armijo(1e-4);
  const Scalar stop = Scalar(1e-13) * (Scalar(1) + s.a().cwiseAbs().maxCoeff());

  Vector<Scalar> p = Vector<Scalar>::Zero(s.n());
  Scalar r = revenue(p);
  Scalar step(1);
  long used = 0;
  for (; used < iters; ++used) {
    const Vector<Scalar> grad = s.a() + Scalar(2) * (s.b() * p);
    const Scalar g2 = grad.squaredNorm();
    if (sqrt(g2) <= stop) break;
    step *= Scalar(2);
    Vector<Scalar> trial = p + step * grad;
    Scalar r_trial = revenue(trial);
    int halvings = 0;
    while (r_trial < r + armijo * step * g2 && halvings < 200) {
      step /= Scalar(2);
      trial = p + step * grad;
      r_trial = revenue(trial);
      ++halvings;
    }
    if (r_trial < r) break;  // no ascent possible at working precision
    p = std::move(trial);
    r = r_trial;
  }

  const Scalar closed = centralized_optimum(s).revenue;
  const Scalar disc = abs(r - closed) / max(Scalar(1), closed);
  Vector<Scalar> value(1);
  value << r;
  return {OracleQuantity::centralized_revenue, value, disc, tolerance, disc <= tolerance,
          "ascent steps: " + std::to_string(used)};
}

/// Iterates simultaneous best response from p = 0 to eps = 1e-12, then
/// tries `deviations` random unilateral deviations per player. Passes when
/// the iteration converged, the limit is within `tolerance` of the closed
/// form p^NE and no deviation improves a payoff by more than
/// `deviation_slack`.
template <typename Scalar>
OracleResult<Scalar> oracle_nash(const DemandSystem<Scalar>& s, std::uint64_t seed = 0,
                                 long deviations = 1'000, Scalar tolerance = Scalar(1e-8),
                                 Scalar deviation_slack = Scalar(1e-9)) {
  const auto path = simulate_best_response<Scalar>(s, Vector<Scalar>::Zero(s.n()), 100'000, Scalar(1e-12));
  const Vector<Scalar>& limit = path.iterates.back();

  SeededStream rng(seed);
  long profitable = 0;
  for (Eigen::Index i = 0; i < s.n(); ++i) {
    const Scalar base = player_payoff(s, limit, i);
    for (long k = 0; k < deviations; ++k) {
      // Deviation magnitudes spread over 10^-6 .. 10^1.
      const double magnitude = std::pow(10.0, rng.uniform(-6.0, 1.0));
      const double delta = (rng.uniform() < 0.5 ? -1.0 : 1.0) * magnitude;
      Vector<Scalar> dev = limit;
      dev(i) += Scalar(delta);
      if (player_payoff(s, dev, i) > base + deviation_slack) ++profitable;
    }
  }

  const Vector<Scalar> p_ne = nash_equilibrium(s).prices.values();
  const Scalar disc = (limit - p_ne).cwiseAbs().maxCoeff();
  const bool ok = path.converged && disc <= tolerance && profitable == 0;
  return {OracleQuantity::nash_prices, limit, disc, tolerance, ok,
          "best-response steps: " + std::to_string(path.steps) +
              ", profitable deviations: " + std::to_string(profitable)};
}

/// Samples PoA(a) over uniform random unit intercepts plus any candidate
/// intercepts, refines the best with 50 projected descent steps on the
/// quotient a^T K~ a / a^T L~ a, and compares the minimum with
/// lambda_min(M). The quotient matrices are assembled here from Cholesky
/// solves, independently of the square-root route.
///
/// The lower side (sampled_min >= lambda_min - tol) must always hold; the
/// upper side (sampled_min <= lambda_min + tol) is required only when
/// candidates were supplied.
template <typename Scalar>
OracleResult<Scalar> oracle_poa_min_with_candidates(const DemandSystem<Scalar>& s, long samples,
                                                    std::uint64_t seed,
                                                    const std::vector<Vector<Scalar>>& candidates,
                                                    Scalar tolerance = Scalar(1e-9)) {
  if (samples < 1) throw Error(ErrorCode::SpecInvalid, "oracle_poa_min needs samples >= 1");
  const Eigen::Index n = s.n();
  const Matrix<Scalar> h = -s.b();
  Matrix<Scalar> g = h;
  g.diagonal() *= Scalar(2);
  const Eigen::LDLT<Matrix<Scalar>> h_fact(h);
  const Eigen::LDLT<Matrix<Scalar>> g_fact(g);
  const Matrix<Scalar> eye = Matrix<Scalar>::Identity(n, n);
  const Matrix<Scalar> l_tilde = h_fact.solve(eye);
  const Matrix<Scalar> g_inv = g_fact.solve(eye);
  const Matrix<Scalar> k_tilde = Scalar(4) * (g_inv - g_inv * h * g_inv);

  const auto revenue_ratio = [&](const Vector<Scalar>& a) {
    const Vector<Scalar> p_star = h_fact.solve(a) / Scalar(2);
    const Vector<Scalar> p_ne = g_fact.solve(a);
    const Scalar r_star = a.dot(p_star) + p_star.dot(s.b() * p_star);
    const Scalar r_ne = a.dot(p_ne) + p_ne.dot(s.b() * p_ne);
    return r_ne / r_star;
  };
  const auto quotient = [&](const Vector<Scalar>& a) {
    return a.dot(k_tilde * a) / a.dot(l_tilde * a);
  };

  SeededStream rng(seed);
  Scalar best = std::numeric_limits<Scalar>::infinity();
  Vector<Scalar> best_a = Vector<Scalar>::Ones(n).normalized();
  for (long k = 0; k < samples; ++k) {
    Vector<Scalar> a(n);
    for (Eigen::Index i = 0; i < n; ++i) a(i) = Scalar(rng.normal());
    if (a.norm() == Scalar(0)) continue;
    a.normalize();
    const Scalar v = revenue_ratio(a);
    if (v < best) {
      best = v;
      best_a = a;
    }
  }
  const Scalar random_min = best;

  Vector<Scalar> a = best_a;
  Scalar q = quotient(a);
  for (int it = 0; it < 50; ++it) {
    const Scalar denom = a.dot(l_tilde * a);
    const Vector<Scalar> grad = Scalar(2) * (k_tilde * a - q * (l_tilde * a)) / denom;
    Scalar step(1);
    bool moved = false;
    for (int h_it = 0; h_it < 40; ++h_it, step /= Scalar(2)) {
      const Vector<Scalar> trial = (a - step * grad).normalized();
      const Scalar q_trial = quotient(trial);
      if (q_trial < q) {
        a = trial;
        q = q_trial;
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  best = std::min(best, revenue_ratio(a));
  for (const auto& c : candidates) best = std::min(best, revenue_ratio(c.normalized()));

  const Scalar lambda_min = poa_extremes(build_poa_matrices(s)).poa_min;
  const Scalar disc = best - lambda_min;
  const bool lower_ok = disc >= -tolerance;
  const bool upper_ok = candidates.empty() || disc <= tolerance;
  Vector<Scalar> value(1);
  value << best;
  return {OracleQuantity::poa_min_sampled, value, disc, tolerance, lower_ok && upper_ok,
          "random-sample minimum: " + std::to_string(static_cast<double>(random_min))};
}

/// Default form: the candidate set is the worst intercept reported by
/// exact_poa_min, so the check certifies both sides of the sandwich.
template <typename Scalar>
OracleResult<Scalar> oracle_poa_min(const DemandSystem<Scalar>& s, long samples = kDefaultOracleSamples,
                                    std::uint64_t seed = 0, Scalar tolerance = Scalar(1e-9)) {
  const std::vector<Vector<Scalar>> candidates{exact_poa_min(s).worst_intercept};
  return oracle_poa_min_with_candidates(s, samples, seed, candidates, tolerance);
}

}  // namespace poa

#endif  // POA_VERIFICATION_ORACLE_HPP
