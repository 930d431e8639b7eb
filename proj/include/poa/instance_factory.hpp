#ifndef POA_INSTANCE_FACTORY_HPP
#define POA_INSTANCE_FACTORY_HPP

// Canonical instances: the symmetric exchangeable model, the star network
// and random strictly diagonally dominant systems.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

#include "poa/demand_model.hpp"

namespace poa {

/// Reproducible uniform draws from std::mt19937_64 (MT19937-64, whose
/// output sequence is fixed by the C++ standard). Doubles are built from
/// the top 53 bits, so sequences do not depend on the standard library's
/// distribution implementations.
class SeededStream {
 public:
  explicit SeededStream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_bits() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal by Box-Muller; consumes two uniforms per call.
  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
  }

 private:
  std::mt19937_64 engine_;
};

template <typename Scalar>
struct SymmetricModelSpec {
  Eigen::Index n = 2;
  Scalar rho = Scalar(0);
  Scalar a_scalar = Scalar(1);
};

/// Closed forms for the symmetric model with mu = (N-1) rho.
template <typename Scalar>
struct SymmetricReference {
  Scalar p_star_scalar;  // a / (2(1 - mu))
  Scalar r_star;         // N a^2 / (4(1 - mu))
  Scalar p_ne_scalar;    // a / (2 - mu)
  Scalar r_ne;           // N a^2 / (2 - mu)^2
  Scalar poa;            // 4(1 - mu)/(2 - mu)^2
};

template <typename Scalar>
struct SymmetricInstance {
  DemandSystem<Scalar> system;
  SymmetricReference<Scalar> reference;
};

/// b_ii = -1 and b_ij = rho, i.e. B = -(1 + rho) I + rho 11^T, with a = a_scalar 1.
template <typename Scalar>
SymmetricInstance<Scalar> make_symmetric(const SymmetricModelSpec<Scalar>& spec) {
  if (spec.n < 1) throw Error(ErrorCode::SpecInvalid, "symmetric model needs n >= 1");
  if (!(spec.rho >= Scalar(0))) throw Error(ErrorCode::SpecInvalid, "symmetric model needs rho >= 0");
  const Scalar mu = Scalar(spec.n - 1) * spec.rho;
  if (!(mu < Scalar(1))) throw Error(ErrorCode::SpecInvalid, "symmetric model needs (n-1) rho < 1");

  Matrix<Scalar> b = Matrix<Scalar>::Constant(spec.n, spec.n, spec.rho);
  b.diagonal().setConstant(Scalar(-1));
  const Vector<Scalar> a = Vector<Scalar>::Constant(spec.n, spec.a_scalar);

  const Scalar n = Scalar(spec.n);
  const Scalar a2 = spec.a_scalar * spec.a_scalar;
  const Scalar two_minus = Scalar(2) - mu;
  SymmetricReference<Scalar> ref{
      spec.a_scalar / (Scalar(2) * (Scalar(1) - mu)),
      n * a2 / (Scalar(4) * (Scalar(1) - mu)),
      spec.a_scalar / two_minus,
      n * a2 / (two_minus * two_minus),
      Scalar(4) * (Scalar(1) - mu) / (two_minus * two_minus),
  };
  return {build_demand_system<Scalar>(a, b, Scalar(0)), ref};
}

template <typename Scalar>
struct StarSpec {
  Eigen::Index n = 2;
  Scalar rho = Scalar(0);
};

/// Product 0 is the hub: b_0j = b_j0 = rho, spokes do not interact,
/// b_ii = -1, a = 1.
template <typename Scalar>
DemandSystem<Scalar> make_star(const StarSpec<Scalar>& spec) {
  if (spec.n < 2) throw Error(ErrorCode::SpecInvalid, "star needs n >= 2");
  if (!(spec.rho > Scalar(0))) throw Error(ErrorCode::SpecInvalid, "star needs rho > 0");
  if (!(Scalar(spec.n - 1) * spec.rho < Scalar(1))) {
    throw Error(ErrorCode::SpecInvalid, "star needs (n-1) rho < 1");
  }
  Matrix<Scalar> b = -Matrix<Scalar>::Identity(spec.n, spec.n);
  for (Eigen::Index j = 1; j < spec.n; ++j) {
    b(0, j) = spec.rho;
    b(j, 0) = spec.rho;
  }
  return build_demand_system<Scalar>(Vector<Scalar>::Ones(spec.n), b, Scalar(0));
}

enum class SignMode { substitutes, complements, mixed };

constexpr std::string_view to_string(SignMode m) {
  switch (m) {
    case SignMode::substitutes: return "substitutes";
    case SignMode::complements: return "complements";
    case SignMode::mixed: return "mixed";
  }
  return "unknown";
}

/// Random symmetric system with max_i mu_i equal to mu_target.
///
/// Draw order from SeededStream(seed):
///   1. d_i = exp(U(log 0.5, log 2)) for i = 0..n-1, and b_ii = -d_i;
///   2. for each pair i < j in row-major order, a magnitude U(0, 1) and,
///      in mixed mode only, a sign (negative when U < 0.5);
///   3. intercepts a_i = U(0.5, 1.5).
/// The off-diagonal block is then multiplied by one global factor chosen
/// so that max_i mu_i lands in [mu_target - 1e-6, mu_target].
template <typename Scalar = double>
DemandSystem<Scalar> make_random(Eigen::Index n, Scalar mu_target, SignMode sign_mode,
                                 std::uint64_t seed) {
  if (n < 1) throw Error(ErrorCode::SpecInvalid, "random instance needs n >= 1");
  if (!(mu_target >= Scalar(0) && mu_target < Scalar(1))) {
    throw Error(ErrorCode::SpecInvalid, "mu_target must lie in [0, 1)");
  }
  if (n == 1 && mu_target > Scalar(0)) {
    throw Error(ErrorCode::SpecInvalid, "a single product has no cross effects, mu_target must be 0");
  }

  SeededStream rng(seed);
  Vector<Scalar> d(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    d(i) = Scalar(std::exp(rng.uniform(std::log(0.5), std::log(2.0))));
  }
  Matrix<Scalar> off = Matrix<Scalar>::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      Scalar w = Scalar(rng.uniform());
      if (sign_mode == SignMode::complements) w = -w;
      if (sign_mode == SignMode::mixed && rng.uniform() < 0.5) w = -w;
      off(i, j) = w;
      off(j, i) = w;
    }
  }
  Vector<Scalar> a(n);
  for (Eigen::Index i = 0; i < n; ++i) a(i) = Scalar(rng.uniform(0.5, 1.5));

  auto mu_at = [&](Scalar scale) {
    Scalar mu(0);
    for (Eigen::Index i = 0; i < n; ++i) {
      Scalar row(0);
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j != i) row += std::abs(scale * off(i, j));
      }
      mu = std::max(mu, row / d(i));
    }
    return mu;
  };

  const Scalar raw = mu_at(Scalar(1));
  Scalar scale = raw > Scalar(0) ? mu_target / raw : Scalar(0);
  const Scalar window(1e-6);
  auto in_window = [&](Scalar mu) { return mu <= mu_target && mu >= mu_target - window; };
  if (!in_window(mu_at(scale))) {
    // Rounding pushed mu past the target; bisect on the scale below it.
    Scalar lo(0), hi = scale;
    for (int it = 0; it < 60 && !in_window(mu_at(scale)); ++it) {
      scale = (lo + hi) / Scalar(2);
      if (mu_at(scale) > mu_target) hi = scale; else lo = scale;
    }
    if (!in_window(mu_at(scale))) scale = lo;
  }

  Matrix<Scalar> b = scale > Scalar(0) ? Matrix<Scalar>(scale * off) : Matrix<Scalar>::Zero(n, n);
  b.diagonal() = -d;
  return build_demand_system<Scalar>(a, b, Scalar(0));
}

}  // namespace poa

#endif  // POA_INSTANCE_FACTORY_HPP
