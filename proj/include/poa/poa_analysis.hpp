#ifndef POA_POA_ANALYSIS_HPP
#define POA_POA_ANALYSIS_HPP

// Price-of-anarchy machinery.
//
// With H = -B, G = -A^NE and D = diag(|b_ii|):
//   L~ = H^{-1},  K~ = 4 (G^{-1} - G^{-1} H G^{-1}),  K = -K~,
//   Y  = H^{1/2} G^{-1} H^{1/2},  M = L~^{-1/2} K~ L~^{-1/2} = 4 Y (I - Y).
// PoA(a) = a^T K~ a / a^T L~ a is a generalized Rayleigh quotient whose
// extremes over a != 0 are the extreme eigenvalues of M. The eigenvalues
// of Y are (1 - l)/(2 - l) over the spectrum l of the normalized
// interaction matrix D^{-1/2} B_off D^{-1/2}.

#include <cmath>
#include <limits>
#include <optional>

#include "poa/demand_model.hpp"
#include "poa/equilibrium.hpp"
#include "poa/spectral_kernel.hpp"

namespace poa {

template <typename Scalar>
struct PoaMatrices {
  Matrix<Scalar> h;        // -B
  Matrix<Scalar> g;        // -A^NE = H + D
  Vector<Scalar> d;        // own-effect magnitudes
  Matrix<Scalar> k;        // Nash revenue matrix: R(p^NE) = -a^T K a / 4
  Matrix<Scalar> l_tilde;  // -B^{-1}
  Matrix<Scalar> k_tilde;  // -K
  Matrix<Scalar> y;
  Matrix<Scalar> m;
};

template <typename Scalar>
PoaMatrices<Scalar> build_poa_matrices(const DemandSystem<Scalar>& s) {
  PoaMatrices<Scalar> pm;
  pm.h = -s.b();
  pm.d = -s.b().diagonal();
  pm.g = pm.h;
  pm.g.diagonal() += pm.d;

  const Matrix<Scalar> g_inv = spd_inverse(pm.g);
  pm.l_tilde = spd_inverse(pm.h);
  pm.k_tilde = symmetrized(Scalar(4) * (g_inv - g_inv * pm.h * g_inv));
  pm.k = -pm.k_tilde;

  const Matrix<Scalar> h_half = spd_sqrt(pm.h);
  pm.y = symmetrized(h_half * g_inv * h_half);

  // Independent route through L~'s own eigendecomposition, so that the
  // identity M = 4Y(I - Y) is a real check.
  const Matrix<Scalar> l_inv_half = spd_inv_sqrt(pm.l_tilde);
  pm.m = symmetrized(l_inv_half * pm.k_tilde * l_inv_half);
  return pm;
}

/// g(l) = 4(1 - l)/(2 - l)^2, the PoA attained along an eigen-direction
/// of the normalized interaction matrix with eigenvalue l. Maximal (= 1)
/// at l = 0, decreasing for l > 0 and increasing for l < 0.
template <typename Scalar>
Scalar spectral_efficiency(Scalar lambda) {
  const Scalar t = Scalar(2) - lambda;
  return Scalar(4) * (Scalar(1) - lambda) / (t * t);
}

/// Worst-case PoA lower bound f(mu) = 4(1 - mu)/(2 - mu)^2.
template <typename Scalar>
Scalar mu_bound(Scalar mu) {
  if (!(mu >= Scalar(0) && mu < Scalar(1))) {
    throw Error(ErrorCode::MuOutOfRange, "mu must lie in [0, 1)");
  }
  return spectral_efficiency(mu);
}

template <typename Scalar>
Scalar alpha_of_mu(Scalar mu) { return (Scalar(2) - mu) / (Scalar(1) - mu); }

template <typename Scalar>
Scalar beta_of_mu(Scalar mu) { return (Scalar(2) + mu) / (Scalar(1) + mu); }

template <typename Scalar>
void require_nonzero_intercept(const Vector<Scalar>& a) {
  if (a.size() == 0 || a.cwiseAbs().maxCoeff() == Scalar(0)) {
    throw Error(ErrorCode::ZeroIntercept, "PoA is undefined for a = 0");
  }
}

/// R(p^NE) / R(p*) for the system's own intercept.
template <typename Scalar>
Scalar poa_of_intercept(const DemandSystem<Scalar>& s) {
  require_nonzero_intercept(s.a());
  const auto opt = centralized_optimum(s);
  const auto ne = nash_equilibrium(s);
  return ne.revenue / opt.revenue;
}

template <typename Scalar>
Scalar poa_of_intercept(const DemandSystem<Scalar>& s, const VectorIn<Scalar>& a) {
  return poa_of_intercept(s.with_intercept(a));
}

/// a^T K~ a / a^T L~ a.
template <typename Scalar>
Scalar poa_quadratic_ratio(const PoaMatrices<Scalar>& pm, const Vector<Scalar>& a) {
  require_nonzero_intercept(a);
  return a.dot(pm.k_tilde * a) / a.dot(pm.l_tilde * a);
}

template <typename Scalar>
struct PoaExtremes {
  Scalar poa_min;
  Scalar poa_max;
};

template <typename Scalar>
PoaExtremes<Scalar> poa_extremes(const PoaMatrices<Scalar>& pm) {
  const auto e = eig_sym(pm.m);
  return {e.eigenvalues(0), e.eigenvalues(e.eigenvalues.size() - 1)};
}

template <typename Scalar>
struct NormalizedInteraction {
  Matrix<Scalar> m_norm;
  Scalar mu_spectral;
  Vector<Scalar> lambda_norm;   // ascending
  Matrix<Scalar> eigenvectors;  // columns match lambda_norm
};

/// (M_norm)_ij = b_ij / sqrt(d_i d_j) off the diagonal, zero on it.
template <typename Scalar>
NormalizedInteraction<Scalar> normalized_interaction(const DemandSystem<Scalar>& s) {
  using std::sqrt;
  const Eigen::Index n = s.n();
  const Vector<Scalar> d = -s.b().diagonal();
  Matrix<Scalar> m_norm = Matrix<Scalar>::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j) m_norm(i, j) = s.b()(i, j) / sqrt(d(i) * d(j));
    }
  }
  m_norm = symmetrized(m_norm);
  auto e = eig_sym(m_norm);
  using std::abs;
  using std::max;
  const Scalar mu_spectral = max(abs(e.eigenvalues(0)), abs(e.eigenvalues(n - 1)));
  return {std::move(m_norm), mu_spectral, std::move(e.eigenvalues), std::move(e.eigenvectors)};
}

template <typename Scalar>
struct ExactPoaMin {
  Scalar value;
  Vector<Scalar> worst_intercept;  // D^{1/2} v for the minimizing eigenvector v
  Scalar minimizing_eigenvalue;
};

/// min_i g(lambda_i) over the spectrum of M_norm, with the intercept that
/// attains it. Ties go to the lowest eigen-index.
template <typename Scalar>
ExactPoaMin<Scalar> exact_poa_min(const DemandSystem<Scalar>& s) {
  using std::sqrt;
  const auto ni = normalized_interaction(s);
  Eigen::Index best = 0;
  Scalar best_value = spectral_efficiency(ni.lambda_norm(0));
  for (Eigen::Index i = 1; i < ni.lambda_norm.size(); ++i) {
    const Scalar v = spectral_efficiency(ni.lambda_norm(i));
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  const Vector<Scalar> d_half = (-s.b().diagonal()).cwiseSqrt();
  Vector<Scalar> a_star = d_half.cwiseProduct(ni.eigenvectors.col(best));
  return {best_value, std::move(a_star), ni.lambda_norm(best)};
}

/// Tests beta(mu) G^{-1} <= H^{-1} <= alpha(mu) G^{-1} in the Loewner order.
template <typename Scalar>
bool loewner_comparison_check(const PoaMatrices<Scalar>& pm, Scalar mu,
                              Scalar tol = Scalar(1e-9)) {
  using std::max;
  const Matrix<Scalar> g_inv = spd_inverse(pm.g);
  const Matrix<Scalar>& h_inv = pm.l_tilde;
  const Scalar scale = max(Scalar(1), max_abs(h_inv));
  const auto upper = eig_sym(Matrix<Scalar>(alpha_of_mu(mu) * g_inv - h_inv));
  const auto lower = eig_sym(Matrix<Scalar>(h_inv - beta_of_mu(mu) * g_inv));
  return upper.eigenvalues(0) >= -tol * scale && lower.eigenvalues(0) >= -tol * scale;
}

template <typename Scalar>
struct PoaReport {
  std::optional<Scalar> poa_of_a;
  Scalar poa_min;
  Scalar poa_max;
  Scalar mu;
  Scalar mu_bound;
  Scalar mu_spectral;
  Scalar exact_poa_min;
  Vector<Scalar> worst_intercept;
  Vector<Scalar> lambda_norm;
  Scalar alpha_mu;
  Scalar beta_mu;
  /// g(mu_spectral). Differs from exact_poa_min when the most negative
  /// eigenvalue of M_norm dominates in magnitude.
  Scalar spectral_formula;
  bool spectral_sign_disagreement;
};

/// Full report; poa_of_a is filled when the system intercept is nonzero.
template <typename Scalar>
PoaReport<Scalar> analyze_poa(const DemandSystem<Scalar>& s, Scalar tol = Scalar(1e-9)) {
  using std::abs;
  const auto pm = build_poa_matrices(s);
  const auto ext = poa_extremes(pm);
  const auto prof = dominance_profile(s);
  const auto ni = normalized_interaction(s);
  const auto exact = exact_poa_min(s);

  PoaReport<Scalar> r;
  if (s.a().cwiseAbs().maxCoeff() > Scalar(0)) r.poa_of_a = poa_of_intercept(s);
  r.poa_min = ext.poa_min;
  r.poa_max = ext.poa_max;
  r.mu = prof.mu;
  r.mu_bound = mu_bound(prof.mu);
  r.mu_spectral = ni.mu_spectral;
  r.exact_poa_min = exact.value;
  r.worst_intercept = exact.worst_intercept;
  r.lambda_norm = ni.lambda_norm;
  r.alpha_mu = alpha_of_mu(prof.mu);
  r.beta_mu = beta_of_mu(prof.mu);
  r.spectral_formula = spectral_efficiency(ni.mu_spectral);
  r.spectral_sign_disagreement = abs(r.spectral_formula - r.exact_poa_min) > tol;
  return r;
}

}  // namespace poa

#endif  // POA_POA_ANALYSIS_HPP
