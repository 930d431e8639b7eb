// Acceptance suite. Prints one [PASS]/[FAIL] line per criterion and exits
// nonzero if any criterion fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "poa/io.hpp"
#include "poa/poa.hpp"
#include "support/brute_force.hpp"
#include "support/run_command.hpp"

#ifndef POA_PRICING_BIN
#error "POA_PRICING_BIN must point at the poa-pricing executable"
#endif

namespace {

namespace fs = std::filesystem;
using namespace poa;

struct Check {
  bool ok = true;
  double worst = 0.0;  // largest observed error, for the report line
  std::string first_failure;

  void expect(bool cond, const std::string& what) {
    if (!cond && ok) first_failure = what;
    ok = ok && cond;
  }
  void near(double got, double want, double tol, const std::string& what) {
    const double err = std::abs(got - want);
    worst = std::max(worst, err);
    std::ostringstream msg;
    msg.precision(17);
    msg << what << ": got " << got << ", want " << want;
    expect(err <= tol, msg.str());
  }
};

int failures = 0;

void report(const char* id, const std::string& title, const Check& c) {
  std::printf("[%s] %s %s (max error %.3g)", c.ok ? "PASS" : "FAIL", id, title.c_str(), c.worst);
  if (!c.ok) std::printf(" -- %s", c.first_failure.c_str());
  std::printf("\n");
  if (!c.ok) ++failures;
}

std::string label(const testing::RandomCase& c) {
  return "n=" + std::to_string(c.n) + " mu=" + io::format_double(c.mu) + " " + std::string(to_string(c.signs)) +
         " seed=" + std::to_string(c.seed);
}

void ac1() {
  Check c;
  for (long n : {2L, 5L, 10L, 50L}) {
    for (double mu : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      const auto inst = make_symmetric(SymmetricModelSpec<double>{n, mu / static_cast<double>(n - 1), 1.0});
      const double want = 4.0 * (1.0 - mu) / ((2.0 - mu) * (2.0 - mu));
      c.near(poa_of_intercept(inst.system), want, 1e-9, "N=" + std::to_string(n) + " mu=" + io::format_double(mu));
    }
  }
  report("AC1", "tightness sweep, PoA(1) = 4(1-mu)/(2-mu)^2 within 1e-9", c);
}

void ac2() {
  Check c;
  const auto s = make_star(StarSpec<double>{5, 0.15});
  const auto prof = dominance_profile(s);
  const auto rep = analyze_poa(s);
  c.near(prof.mu, 0.6, 1e-9, "max mu_i");
  c.near(rep.mu_spectral, 0.3, 1e-9, "mu_spectral");
  c.near(rep.mu_bound, 40.0 / 49.0, 1e-9, "mu_bound exact");
  c.near(rep.exact_poa_min, 280.0 / 289.0, 1e-9, "exact_poa_min exact");
  c.near(rep.mu_bound, 0.816, 1e-3, "mu_bound printed");
  c.near(rep.exact_poa_min, 0.969, 1e-3, "exact_poa_min printed");
  report("AC2", "star N=5 rho=0.15: mu=0.6, mu_spectral=0.3, bounds 0.816 / 0.969", c);
}

void ac3(const fs::path& scratch) {
  Check c;
  c.expect(mu_bound(0.5) >= 0.889 - 5e-4, "mu_bound(0.5) below 0.8885");
  const auto out = scratch / "curve.csv";
  const auto r = testing::run_command(POA_PRICING_BIN,
                                      "curve --mu-min 0 --mu-max 0.99 --steps 100 --output \"" + out.string() + "\"",
                                      scratch);
  c.expect(r.exit_code == 0, "curve exit code " + std::to_string(r.exit_code));
  std::istringstream in(testing::slurp(out));
  std::string line;
  std::getline(in, line);
  c.expect(line == "mu,bound", "header '" + line + "'");
  std::vector<std::pair<double, double>> rows;
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    rows.emplace_back(std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1)));
  }
  c.expect(rows.size() == 100, "row count");
  c.expect(!rows.empty() && rows.front() == std::make_pair(0.0, 1.0), "first row is not (0, 1)");
  for (std::size_t k = 1; k < rows.size(); ++k) {
    c.expect(rows[k].second < rows[k - 1].second, "bound not strictly decreasing at row " + std::to_string(k));
  }
  report("AC3", "mu_bound(0.5) >= 0.8885; curve starts at (0, 1) and strictly decreases", c);
}

void ac4() {
  Check c;
  for (const auto& rc : testing::spectral_sweep_cases()) {
    const auto s = make_random<double>(rc.n, rc.mu, rc.signs, rc.seed);
    const auto pm = build_poa_matrices(s);
    const auto ni = normalized_interaction(s);
    const double mu = dominance_profile(s).mu;
    const std::string tag = label(rc);

    std::vector<double> theta;
    for (Eigen::Index i = 0; i < ni.lambda_norm.size(); ++i) {
      const double l = ni.lambda_norm(i);
      theta.push_back((1.0 - l) / (2.0 - l));
    }
    std::sort(theta.begin(), theta.end());
    const Vectord y_eigs = eig_sym(pm.y).eigenvalues;
    for (Eigen::Index i = 0; i < y_eigs.size(); ++i) {
      c.near(y_eigs(i), theta[static_cast<std::size_t>(i)], 1e-9, tag + " lambda(Y)");
    }

    const Matrixd four_y = 4.0 * pm.y * (Matrixd::Identity(s.n(), s.n()) - pm.y);
    c.near(max_abs(pm.m - four_y), 0.0, 1e-9, tag + " M vs 4Y(I-Y)");

    const double lmin = poa_extremes(pm).poa_min;
    double gmin = 1.0;
    for (Eigen::Index i = 0; i < ni.lambda_norm.size(); ++i) gmin = std::min(gmin, spectral_efficiency(ni.lambda_norm(i)));
    c.near(lmin, gmin, 1e-9, tag + " lambda_min(M) vs min g");
    c.expect(lmin >= mu_bound(mu) - 1e-9, tag + " lambda_min(M) below mu_bound");

    const double lo = (1.0 - mu) / (2.0 - mu) - 1e-9;
    const double hi = (1.0 + mu) / (2.0 + mu) + 1e-9;
    c.expect(y_eigs.minCoeff() >= lo && y_eigs.maxCoeff() <= hi, tag + " lambda(Y) outside interval");
  }
  report("AC4", "spectral chain on 200 random instances within 1e-9", c);
}

void ac5() {
  Check c;
  for (const auto& rc : testing::spectral_sweep_cases()) {
    const auto s = make_random<double>(rc.n, rc.mu, rc.signs, rc.seed);
    const auto worst = exact_poa_min(s);
    const double lmin = poa_extremes(build_poa_matrices(s)).poa_min;
    c.near(poa_of_intercept(s, worst.worst_intercept), lmin, 1e-9, label(rc));
  }
  report("AC5", "PoA at the worst intercept equals lambda_min(M) within 1e-9 on 200 instances", c);
}

void ac6() {
  Check c;
  std::vector<std::pair<std::string, DemandSystemd>> cases;
  cases.emplace_back("symmetric N=2 rho=0.5", make_symmetric(SymmetricModelSpec<double>{2, 0.5, 1.0}).system);
  cases.emplace_back("star N=5 rho=0.15", make_star(StarSpec<double>{5, 0.15}));
  cases.emplace_back("diagonal", build_demand_system<double>(Vectord::Ones(3), Matrixd(-Matrixd::Identity(3, 3))));
  const auto sweep = testing::spectral_sweep_cases();
  for (std::size_t k = 0; k < sweep.size(); k += 10) {
    cases.emplace_back(label(sweep[k]), make_random<double>(sweep[k].n, sweep[k].mu, sweep[k].signs, sweep[k].seed));
  }
  for (const auto& [tag, s] : cases) {
    const auto central = oracle_centralized(s);
    c.worst = std::max(c.worst, central.discrepancy);
    c.expect(central.discrepancy < 1e-6, tag + " centralized discrepancy " + io::format_double(central.discrepancy));
    const auto nash = oracle_nash(s);
    c.expect(nash.passed, tag + " nash: " + nash.note + ", discrepancy " + io::format_double(nash.discrepancy));
    const auto sampled = oracle_poa_min(s, 1000, 0);
    c.expect(sampled.passed, tag + " poa_min sandwich, discrepancy " + io::format_double(sampled.discrepancy));
  }
  report("AC6", "oracles agree with closed forms (" + std::to_string(cases.size()) + " instances)", c);
}

void ac7() {
  Check c;
  SeededStream rng(77);
  long worst_steps = 0;
  for (double mu : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    for (const auto mode : {SignMode::substitutes, SignMode::complements, SignMode::mixed}) {
      const auto s = make_random<double>(6, mu, mode, 500 + static_cast<std::uint64_t>(mu * 10));
      const Vectord p_ne = nash_equilibrium(s).prices.values();
      const std::string tag = "mu=" + io::format_double(mu) + " " + std::string(to_string(mode));
      for (int start = 0; start < 10; ++start) {
        const Vectord p0 = testing::random_vector(6, rng, 0.0, 5.0);
        const auto rec = best_response_dynamics(s, p0, 200, 1e-10);
        worst_steps = std::max(worst_steps, rec.steps);
        c.expect(rec.converged, tag + " best response did not converge in 200 steps");
        c.near((rec.iterates.back().values() - p_ne).cwiseAbs().maxCoeff(), 0.0, 1e-8, tag + " br limit");
      }
      const auto gd = gradient_play(s, Vectord(Vectord::Zero(6)), eta_max(s) / 2.0, 1'000'000, 1e-12);
      c.expect(gd.converged, tag + " gradient play did not converge");
      c.near((gd.iterates.back().values() - p_ne).cwiseAbs().maxCoeff(), 0.0, 1e-6, tag + " gd limit");
    }
  }
  report("AC7", "best response within 200 steps (worst " + std::to_string(worst_steps) +
                    "), gradient play at eta_max/2 reaches p_NE",
         c);
}

void ac8() {
  Check c;
  for (const auto& rc : testing::spectral_sweep_cases()) {
    const auto s = make_random<double>(rc.n, rc.mu, rc.signs, rc.seed);
    c.expect(loewner_comparison_check(build_poa_matrices(s), dominance_profile(s).mu), label(rc));
  }
  Matrixd b = Matrixd::Zero(4, 4);
  b.diagonal() << -1.0, -2.0, -0.5, -3.0;
  const auto diag = build_demand_system<double>(Vectord::Ones(4), b);
  const auto pm = build_poa_matrices(diag);
  c.near(max_abs(pm.l_tilde - 2.0 * spd_inverse(pm.g)), 0.0, 1e-9, "mu=0: H^-1 vs 2 G^-1");
  c.near(alpha_of_mu(0.0), 2.0, 0.0, "alpha(0)");
  c.near(beta_of_mu(0.0), 2.0, 0.0, "beta(0)");
  report("AC8", "Loewner comparison on 200 instances; H^-1 = 2 G^-1 at mu=0", c);
}

void ac9(const fs::path& scratch) {
  Check c;
  const auto p = [&](const std::string& name) { return "\"" + (scratch / name).string() + "\""; };
  const std::vector<std::string> generate = {
      "generate --model random --n 6 --mu 0.7 --signs mixed --seed 42 --output ",
      "generate --model symmetric --n 4 --rho 0.2 --output ",
      "generate --model star --n 5 --rho 0.15 --output ",
  };
  for (std::size_t g = 0; g < generate.size(); ++g) {
    std::string bytes[2], analysis[2], csv[2];
    for (int run = 0; run < 2; ++run) {
      const std::string inst = "inst" + std::to_string(g) + "_" + std::to_string(run) + ".json";
      const std::string out = "an" + std::to_string(g) + "_" + std::to_string(run);
      auto r = testing::run_command(POA_PRICING_BIN, generate[g] + p(inst), scratch);
      c.expect(r.exit_code == 0, "generate failed: " + r.err);
      r = testing::run_command(POA_PRICING_BIN,
                               "analyze --input " + p(inst) + " --verify --seed 9 --output " + p(out + ".json"),
                               scratch);
      c.expect(r.exit_code == 0, "analyze failed: " + r.err);
      r = testing::run_command(POA_PRICING_BIN,
                               "analyze --input " + p(inst) + " --format csv --output " + p(out + ".csv"), scratch);
      c.expect(r.exit_code == 0, "analyze csv failed: " + r.err);
      bytes[run] = testing::slurp(scratch / inst);
      analysis[run] = testing::slurp(scratch / (out + ".json"));
      csv[run] = testing::slurp(scratch / (out + ".csv"));
    }
    c.expect(!bytes[0].empty() && bytes[0] == bytes[1], "generate output differs: " + generate[g]);
    c.expect(!analysis[0].empty() && analysis[0] == analysis[1], "analyze json differs: " + generate[g]);
    c.expect(!csv[0].empty() && csv[0] == csv[1], "analyze csv differs: " + generate[g]);
  }
  report("AC9", "generate and analyze are byte-identical across runs", c);
}

}  // namespace

int main() {
  const fs::path scratch = fs::temp_directory_path() / "poa_acceptance";
  fs::remove_all(scratch);
  fs::create_directories(scratch);
  ac1();
  ac2();
  ac3(scratch);
  ac4();
  ac5();
  ac6();
  ac7();
  ac8();
  ac9(scratch);
  fs::remove_all(scratch);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
