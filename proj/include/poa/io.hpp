#ifndef POA_IO_HPP
#define POA_IO_HPP

// File formats: instance JSON, reference record, analysis document,
// trajectory CSV and bound-curve CSV. All numbers are written in their
// shortest round-trip decimal form.

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "poa/poa.hpp"

namespace poa::io {

/// Unreadable file, unwritable destination, malformed JSON or a JSON
/// document that does not follow the schema.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kToolName = "poa-pricing";
std::string tool_version();

/// Shortest decimal that parses back to exactly `value`.
std::string format_double(double value);

std::string read_file(const std::filesystem::path& path);
/// Writes to a sibling temporary and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// {"n": int, "a": [...], "b": [[...], ...]}, full row-major matrix.
/// Schema problems raise IoError; model violations raise poa::Error.
DemandSystemd parse_instance(const nlohmann::json& doc,
                             double symmetry_tol = kDefaultSymmetryTol);
DemandSystemd load_instance(const std::filesystem::path& path);
nlohmann::json instance_to_json(const DemandSystemd& s);

/// Accepts a bare array or {"a": [...]}.
Vectord parse_intercept(const nlohmann::json& doc);
Vectord parse_price_vector(const nlohmann::json& doc);

nlohmann::json reference_to_json(const SymmetricReference<double>& ref);
nlohmann::json oracle_to_json(const OracleResult<double>& r);

struct AnalysisDocument {
  DemandSystemd system;  // carries the analyzed intercept
  DominanceProfile<double> dominance;
  EquilibriumPair<double> equilibrium;
  PoaReport<double> poa;
  std::vector<OracleResult<double>> oracles;
  std::optional<std::string> timestamp;
};

AnalysisDocument build_analysis(const DemandSystemd& s);
nlohmann::json analysis_to_json(const AnalysisDocument& doc);
/// Two-column "field,value" listing; vectors are flattened as field[i].
std::string analysis_to_csv(const AnalysisDocument& doc);

/// Columns step,dist_to_ne,revenue,p_0..p_{N-1}.
std::string trajectory_csv(const TrajectoryRecord<double>& rec);

/// Header "mu,bound" and `steps` evenly spaced rows over [mu_min, mu_max].
std::string curve_csv(double mu_min, double mu_max, long steps);

/// json::dump with a trailing newline.
std::string dump(const nlohmann::json& doc);

}  // namespace poa::io

#endif  // POA_IO_HPP
