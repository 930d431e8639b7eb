// poa-pricing: command-line front end for the pricing / price-of-anarchy
// library.
//
// Exit codes: 0 ok, 1 I/O or parse failure, 2 validation or spec
// violation, 3 oracle failure, 4 dynamics did not converge.

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <future>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "poa/io.hpp"
#include "poa/poa.hpp"

namespace {

using poa::io::IoError;
using nlohmann::json;

enum Exit : int { kOk = 0, kIo = 1, kInvalid = 2, kOracle = 3, kNotConverged = 4 };

json parse_json_file(const std::string& path) {
  try {
    return json::parse(poa::io::read_file(path));
  } catch (const json::parse_error& e) {
    throw IoError(std::string("malformed JSON in ") + path + ": " + e.what());
  }
}

unsigned oracle_threads() {
  if (const char* env = std::getenv("POA_PRICING_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<poa::OracleResult<double>> run_oracles(const poa::DemandSystemd& s, long samples,
                                                   std::uint64_t seed) {
  auto central = [&] { return poa::oracle_centralized(s); };
  auto nash = [&] { return poa::oracle_nash(s, seed); };
  auto sampled = [&] { return poa::oracle_poa_min(s, samples, seed); };
  if (oracle_threads() < 2) return {central(), nash(), sampled()};
  auto f1 = std::async(std::launch::async, central);
  auto f2 = std::async(std::launch::async, nash);
  auto f3 = std::async(std::launch::async, sampled);
  return {f1.get(), f2.get(), f3.get()};
}

bool all_passed(const std::vector<poa::OracleResult<double>>& results) {
  for (const auto& r : results) {
    if (!r.passed) return false;
  }
  return true;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string default_reference_path(const std::string& output) {
  std::filesystem::path p(output);
  if (p.extension() == ".json") p.replace_extension();
  p += ".reference.json";
  return p.string();
}

struct ValidateArgs {
  std::string input;
};

int cmd_validate(const ValidateArgs& args) {
  const auto s = poa::io::load_instance(args.input);
  const auto prof = poa::dominance_profile(s);
  std::cout << "valid: n=" << s.n() << " mu=" << poa::io::format_double(prof.mu) << " mu_local=[";
  for (Eigen::Index i = 0; i < prof.mu_local.size(); ++i) {
    std::cout << (i ? "," : "") << poa::io::format_double(prof.mu_local(i));
  }
  std::cout << "]\n";
  return kOk;
}

struct AnalyzeArgs {
  std::string input;
  std::string intercept;
  std::string output;
  std::string format = "json";
  bool verify = false;
  long samples = poa::kDefaultOracleSamples;
  std::uint64_t seed = 0;
  bool timestamp = false;
};

int cmd_analyze(const AnalyzeArgs& args) {
  auto s = poa::io::load_instance(args.input);
  if (!args.intercept.empty()) s = s.with_intercept(poa::io::parse_intercept(parse_json_file(args.intercept)));
  poa::require_nonzero_intercept(s.a());

  auto doc = poa::io::build_analysis(s);
  if (args.verify) doc.oracles = run_oracles(s, args.samples, args.seed);
  if (args.timestamp) doc.timestamp = utc_timestamp();

  const std::string body = args.format == "csv" ? poa::io::analysis_to_csv(doc)
                                                : poa::io::dump(poa::io::analysis_to_json(doc));
  poa::io::write_file_atomic(args.output, body);
  if (args.verify && !all_passed(doc.oracles)) {
    for (const auto& o : doc.oracles) {
      if (!o.passed) std::cerr << "oracle failed: " << poa::to_string(o.quantity) << " (" << o.note << ")\n";
    }
    return kOracle;
  }
  return kOk;
}

struct VerifyArgs {
  std::string input;
  long samples = poa::kDefaultOracleSamples;
  std::uint64_t seed = 0;
};

int cmd_verify(const VerifyArgs& args) {
  const auto s = poa::io::load_instance(args.input);
  poa::require_nonzero_intercept(s.a());
  const auto results = run_oracles(s, args.samples, args.seed);
  for (const auto& r : results) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << poa::to_string(r.quantity)
              << " discrepancy=" << poa::io::format_double(r.discrepancy)
              << " tolerance=" << poa::io::format_double(r.tolerance) << " (" << r.note << ")\n";
  }
  return all_passed(results) ? kOk : kOracle;
}

struct CurveArgs {
  double mu_min = 0.0;
  double mu_max = 0.9;
  long steps = 10;
  std::string output;
};

int cmd_curve(const CurveArgs& args) {
  poa::io::write_file_atomic(args.output, poa::io::curve_csv(args.mu_min, args.mu_max, args.steps));
  return kOk;
}

struct GenerateArgs {
  std::string model;
  long n = 2;
  double rho = 0.0;
  double a = 1.0;
  double mu = 0.0;
  std::string signs = "substitutes";
  std::uint64_t seed = 0;
  std::string output;
  std::string reference;
};

poa::SignMode parse_sign_mode(const std::string& s) {
  if (s == "complements") return poa::SignMode::complements;
  if (s == "mixed") return poa::SignMode::mixed;
  return poa::SignMode::substitutes;
}

int cmd_generate(const GenerateArgs& args) {
  if (args.model == "symmetric") {
    const auto inst = poa::make_symmetric(poa::SymmetricModelSpec<double>{args.n, args.rho, args.a});
    poa::io::write_file_atomic(args.output, poa::io::dump(poa::io::instance_to_json(inst.system)));
    const std::string ref = args.reference.empty() ? default_reference_path(args.output) : args.reference;
    poa::io::write_file_atomic(ref, poa::io::dump(poa::io::reference_to_json(inst.reference)));
  } else if (args.model == "star") {
    const auto s = poa::make_star(poa::StarSpec<double>{args.n, args.rho});
    poa::io::write_file_atomic(args.output, poa::io::dump(poa::io::instance_to_json(s)));
  } else {
    const auto s = poa::make_random<double>(args.n, args.mu, parse_sign_mode(args.signs), args.seed);
    poa::io::write_file_atomic(args.output, poa::io::dump(poa::io::instance_to_json(s)));
  }
  return kOk;
}

struct SimulateArgs {
  std::string input;
  std::string dynamic = "br";
  std::optional<double> eta;
  std::string p0;
  long max_iters = poa::kDefaultMaxIters;
  double eps = poa::kDefaultDynamicsEps;
  std::string output;
};

int cmd_simulate(const SimulateArgs& args) {
  const auto s = poa::io::load_instance(args.input);
  poa::Vectord p0 = poa::Vectord::Zero(s.n());
  if (!args.p0.empty()) {
    p0 = poa::io::parse_price_vector(parse_json_file(args.p0));
    if (p0.size() != s.n()) throw poa::Error(poa::ErrorCode::DimensionMismatch, "p0 length differs from N");
  }
  poa::TrajectoryRecord<double> rec;
  if (args.dynamic == "gd") {
    const double eta = args.eta.value_or(poa::eta_max(s) / 2.0);
    rec = poa::gradient_play(s, p0, eta, args.max_iters, args.eps);
  } else {
    rec = poa::best_response_dynamics(s, p0, args.max_iters, args.eps);
  }
  poa::io::write_file_atomic(args.output, poa::io::trajectory_csv(rec));
  std::cout << "steps=" << rec.steps << " dist_to_ne=" << poa::io::format_double(rec.dist_to_ne.back())
            << " converged=" << (rec.converged ? "true" : "false") << " final=[";
  const auto& last = rec.iterates.back().values();
  for (Eigen::Index i = 0; i < last.size(); ++i) std::cout << (i ? "," : "") << poa::io::format_double(last(i));
  std::cout << "]\n";
  return rec.converged ? kOk : kNotConverged;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal and Nash-equilibrium pricing for linear demand systems, with price-of-anarchy analysis"};
  app.require_subcommand(1);
  app.set_version_flag("--version", poa::io::tool_version());

  ValidateArgs validate;
  auto* v = app.add_subcommand("validate", "Check an instance against the model assumptions");
  v->add_option("--input", validate.input, "Instance JSON")->required();

  AnalyzeArgs analyze;
  auto* an = app.add_subcommand(
      "analyze",
      "Equilibria and price-of-anarchy report. The intercept defaults to the instance's own a; "
      "--intercept overrides it");
  an->add_option("--input", analyze.input, "Instance JSON")->required();
  an->add_option("--intercept", analyze.intercept, "Intercept JSON (array or {\"a\": [...]})");
  an->add_option("--output", analyze.output, "Output path")->required();
  an->add_option("--format", analyze.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  an->add_flag("--verify", analyze.verify, "Run the brute-force oracles (exit 3 on failure)");
  an->add_option("--samples", analyze.samples, "Random intercepts for the PoA oracle")->check(CLI::PositiveNumber);
  an->add_option("--seed", analyze.seed, "Oracle seed");
  an->add_flag("--timestamp", analyze.timestamp, "Record the UTC time in the document");

  VerifyArgs verify;
  auto* ve = app.add_subcommand("verify", "Run the brute-force oracles against the closed forms");
  ve->add_option("--input", verify.input, "Instance JSON")->required();
  ve->add_option("--samples", verify.samples, "Random intercepts for the PoA oracle")->check(CLI::PositiveNumber);
  ve->add_option("--seed", verify.seed, "Oracle seed");

  CurveArgs curve;
  auto* cu = app.add_subcommand("curve", "Tabulate the bound 4(1-mu)/(2-mu)^2");
  cu->add_option("--mu-min", curve.mu_min)->required();
  cu->add_option("--mu-max", curve.mu_max)->required();
  cu->add_option("--steps", curve.steps)->required();
  cu->add_option("--output", curve.output)->required();

  GenerateArgs gen;
  auto* ge = app.add_subcommand("generate", "Write a canonical or random instance");
  ge->add_option("--model", gen.model)->required()->check(CLI::IsMember({"symmetric", "star", "random"}));
  ge->add_option("--n", gen.n, "Number of products");
  ge->add_option("--rho", gen.rho, "Cross effect (symmetric, star)");
  ge->add_option("--a", gen.a, "Common intercept (symmetric)");
  ge->add_option("--mu", gen.mu, "Target dominance parameter (random)");
  ge->add_option("--signs", gen.signs, "substitutes, complements or mixed (random)")
      ->check(CLI::IsMember({"substitutes", "complements", "mixed"}));
  ge->add_option("--seed", gen.seed, "Seed (random)");
  ge->add_option("--output", gen.output)->required();
  ge->add_option("--reference", gen.reference, "Reference record path (symmetric)");

  SimulateArgs sim;
  auto* si = app.add_subcommand("simulate", "Run best-response (br) or gradient-play (gd) dynamics");
  si->add_option("--input", sim.input, "Instance JSON")->required();
  si->add_option("--dynamic", sim.dynamic)->check(CLI::IsMember({"br", "gd"}));
  si->add_option("--eta", sim.eta, "Gradient step (default eta_max / 2)");
  si->add_option("--p0", sim.p0, "Starting prices JSON (default 0)");
  si->add_option("--max-iters", sim.max_iters);
  si->add_option("--eps", sim.eps);
  si->add_option("--output", sim.output)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalid;
  }

  try {
    if (*v) return cmd_validate(validate);
    if (*an) return cmd_analyze(analyze);
    if (*ve) return cmd_verify(verify);
    if (*cu) return cmd_curve(curve);
    if (*ge) return cmd_generate(gen);
    if (*si) return cmd_simulate(sim);
  } catch (const poa::Error& e) {
    std::cerr << "invalid: " << e.what() << "\n";
    return kInvalid;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  }
  return kOk;
}
