#include "poa/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#ifndef POA_VERSION
#define POA_VERSION "0.0.0"
#endif

namespace poa::io {

using nlohmann::json;

std::string tool_version() { return POA_VERSION; }

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  if (res.ec != std::errc()) throw IoError("could not format number");
  return std::string(buf, res.ptr);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error reading " + path.string());
  return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("error writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move output into place at " + path.string());
  }
}

namespace {

double number_at(const json& v, const std::string& where) {
  if (!v.is_number()) throw IoError(where + " must be a number");
  return v.get<double>();
}

Vectord number_array(const json& v, const std::string& where) {
  if (!v.is_array()) throw IoError(where + " must be an array of numbers");
  Vectord out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = number_at(v[i], where + "[" + std::to_string(i) + "]");
  }
  return out;
}

json to_json(const Vectord& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw IoError(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

DemandSystemd parse_instance(const json& doc, double symmetry_tol) {
  if (!doc.is_object()) throw IoError("instance must be a JSON object");
  for (const char* key : {"n", "a", "b"}) {
    if (!doc.contains(key)) throw IoError(std::string("instance is missing \"") + key + "\"");
  }
  if (!doc["n"].is_number_integer()) throw IoError("\"n\" must be an integer");
  const auto n = doc["n"].get<long long>();
  const Vectord a = number_array(doc["a"], "a");

  const json& rows = doc["b"];
  if (!rows.is_array()) throw IoError("\"b\" must be an array of rows");
  if (n < 1) throw Error(ErrorCode::DimensionMismatch, "n must be positive");
  if (a.size() != n) throw Error(ErrorCode::DimensionMismatch, "length of a differs from n");
  if (static_cast<long long>(rows.size()) != n) {
    throw Error(ErrorCode::DimensionMismatch, "b must have n rows");
  }
  Matrixd b(n, n);
  for (long long i = 0; i < n; ++i) {
    const Vectord row = number_array(rows[static_cast<std::size_t>(i)], "b[" + std::to_string(i) + "]");
    if (row.size() != n) {
      throw Error(ErrorCode::DimensionMismatch, "row of b has wrong length", static_cast<std::size_t>(i));
    }
    b.row(i) = row.transpose();
  }
  return build_demand_system<double>(a, b, symmetry_tol);
}

DemandSystemd load_instance(const std::filesystem::path& path) {
  return parse_instance(parse_text(read_file(path)));
}

json instance_to_json(const DemandSystemd& s) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < s.n(); ++i) rows.push_back(to_json(s.b().row(i).transpose()));
  json doc;
  doc["n"] = s.n();
  doc["a"] = to_json(s.a());
  doc["b"] = std::move(rows);
  return doc;
}

Vectord parse_intercept(const json& doc) {
  if (doc.is_object()) {
    if (!doc.contains("a")) throw IoError("intercept object is missing \"a\"");
    return number_array(doc["a"], "a");
  }
  return number_array(doc, "intercept");
}

Vectord parse_price_vector(const json& doc) {
  if (doc.is_object()) {
    if (!doc.contains("p")) throw IoError("price object is missing \"p\"");
    return number_array(doc["p"], "p");
  }
  return number_array(doc, "p0");
}

json reference_to_json(const SymmetricReference<double>& ref) {
  json doc;
  doc["p_star_scalar"] = ref.p_star_scalar;
  doc["r_star"] = ref.r_star;
  doc["p_ne_scalar"] = ref.p_ne_scalar;
  doc["r_ne"] = ref.r_ne;
  doc["poa"] = ref.poa;
  return doc;
}

json oracle_to_json(const OracleResult<double>& r) {
  json doc;
  doc["quantity"] = std::string(to_string(r.quantity));
  if (r.value.size() == 1 && r.quantity != OracleQuantity::nash_prices) {
    doc["value"] = r.value(0);
  } else {
    doc["value"] = to_json(r.value);
  }
  doc["discrepancy"] = r.discrepancy;
  doc["tolerance"] = r.tolerance;
  doc["passed"] = r.passed;
  doc["note"] = r.note;
  return doc;
}

AnalysisDocument build_analysis(const DemandSystemd& s) {
  return AnalysisDocument{s, dominance_profile(s), equilibrium_pair(s), analyze_poa(s), {}, std::nullopt};
}

json analysis_to_json(const AnalysisDocument& d) {
  json doc;
  doc["tool"] = {{"name", kToolName}, {"version", tool_version()}};
  if (d.timestamp) doc["timestamp"] = *d.timestamp;
  doc["instance"] = instance_to_json(d.system);
  doc["dominance"] = {{"d", to_json(d.dominance.d)},
                      {"mu_local", to_json(d.dominance.mu_local)},
                      {"mu", d.dominance.mu}};
  doc["equilibrium"] = {{"p_star", to_json(d.equilibrium.p_star.values())},
                        {"p_ne", to_json(d.equilibrium.p_ne.values())},
                        {"r_star", d.equilibrium.r_star},
                        {"r_ne", d.equilibrium.r_ne}};
  const auto& r = d.poa;
  json poa;
  poa["poa_of_a"] = r.poa_of_a ? json(*r.poa_of_a) : json(nullptr);
  poa["poa_min"] = r.poa_min;
  poa["poa_max"] = r.poa_max;
  poa["mu"] = r.mu;
  poa["mu_bound"] = r.mu_bound;
  poa["mu_spectral"] = r.mu_spectral;
  poa["exact_poa_min"] = r.exact_poa_min;
  poa["worst_intercept"] = to_json(r.worst_intercept);
  poa["lambda_norm"] = to_json(r.lambda_norm);
  poa["alpha_mu"] = r.alpha_mu;
  poa["beta_mu"] = r.beta_mu;
  poa["spectral_formula"] = r.spectral_formula;
  poa["spectral_sign_disagreement"] = r.spectral_sign_disagreement;
  doc["poa"] = std::move(poa);
  if (!d.oracles.empty()) {
    json arr = json::array();
    for (const auto& o : d.oracles) arr.push_back(oracle_to_json(o));
    doc["oracles"] = std::move(arr);
  }
  return doc;
}

namespace {

void csv_scalar(std::string& out, const std::string& key, double v) {
  out += key + "," + format_double(v) + "\n";
}

void csv_vector(std::string& out, const std::string& key, const Vectord& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    csv_scalar(out, key + "[" + std::to_string(i) + "]", v(i));
  }
}

}  // namespace

std::string analysis_to_csv(const AnalysisDocument& d) {
  std::string out = "field,value\n";
  out += std::string("tool,") + kToolName + " " + tool_version() + "\n";
  if (d.timestamp) out += "timestamp," + *d.timestamp + "\n";
  csv_scalar(out, "n", static_cast<double>(d.system.n()));
  csv_vector(out, "a", d.system.a());
  csv_vector(out, "d", d.dominance.d);
  csv_vector(out, "mu_local", d.dominance.mu_local);
  csv_scalar(out, "mu", d.dominance.mu);
  csv_vector(out, "p_star", d.equilibrium.p_star.values());
  csv_vector(out, "p_ne", d.equilibrium.p_ne.values());
  csv_scalar(out, "r_star", d.equilibrium.r_star);
  csv_scalar(out, "r_ne", d.equilibrium.r_ne);
  const auto& r = d.poa;
  out += "poa_of_a," + (r.poa_of_a ? format_double(*r.poa_of_a) : std::string()) + "\n";
  csv_scalar(out, "poa_min", r.poa_min);
  csv_scalar(out, "poa_max", r.poa_max);
  csv_scalar(out, "mu_bound", r.mu_bound);
  csv_scalar(out, "mu_spectral", r.mu_spectral);
  csv_scalar(out, "exact_poa_min", r.exact_poa_min);
  csv_vector(out, "worst_intercept", r.worst_intercept);
  csv_vector(out, "lambda_norm", r.lambda_norm);
  csv_scalar(out, "alpha_mu", r.alpha_mu);
  csv_scalar(out, "beta_mu", r.beta_mu);
  csv_scalar(out, "spectral_formula", r.spectral_formula);
  out += std::string("spectral_sign_disagreement,") + (r.spectral_sign_disagreement ? "true" : "false") + "\n";
  for (const auto& o : d.oracles) {
    const std::string key = "oracle." + std::string(to_string(o.quantity));
    csv_scalar(out, key + ".discrepancy", o.discrepancy);
    out += key + ".passed," + (o.passed ? "true" : "false") + "\n";
  }
  return out;
}

std::string trajectory_csv(const TrajectoryRecord<double>& rec) {
  std::string out = "step,dist_to_ne,revenue";
  const Eigen::Index n = rec.iterates.empty() ? 0 : rec.iterates.front().size();
  for (Eigen::Index i = 0; i < n; ++i) out += ",p_" + std::to_string(i);
  out += "\n";
  for (std::size_t k = 0; k < rec.iterates.size(); ++k) {
    out += std::to_string(rec.step_index[k]) + "," + format_double(rec.dist_to_ne[k]) + "," +
           format_double(rec.revenues[k]);
    for (Eigen::Index i = 0; i < n; ++i) out += "," + format_double(rec.iterates[k][i]);
    out += "\n";
  }
  return out;
}

std::string curve_csv(double mu_min, double mu_max, long steps) {
  if (!(mu_min >= 0.0 && mu_min < mu_max && mu_max < 1.0) || steps < 2) {
    throw Error(ErrorCode::MuOutOfRange, "curve needs 0 <= mu_min < mu_max < 1 and steps >= 2");
  }
  std::string out = "mu,bound\n";
  for (long k = 0; k < steps; ++k) {
    const double mu = k == steps - 1
                          ? mu_max
                          : mu_min + (mu_max - mu_min) * static_cast<double>(k) / static_cast<double>(steps - 1);
    out += format_double(mu) + "," + format_double(mu_bound(mu)) + "\n";
  }
  return out;
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

}  // namespace poa::io
