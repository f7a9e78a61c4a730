// Serializable outcome of a theorem-verification run, plus the field-wise
// report diff used for reproducibility checks.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "monocalc/core.hpp"
#include "monocalc/operators.hpp"

namespace monocalc {

inline constexpr const char* kToolVersion = "0.1.0";

// Raised when a documented precondition for an operation is not established
// (e.g. asking for a unique-extension oracle of a set whose polar has a
// certificate). Maps to "refused" at the report level.
struct refusal_error : std::runtime_error {
  explicit refusal_error(const std::string& m) : std::runtime_error(m) {}
};

enum class CheckStatus { pass, fail, bounded_pass, refused };

const char* to_string(CheckStatus s);
CheckStatus status_from_string(const std::string& s);

struct CheckStats {
  std::int64_t evaluations = 0;
  std::int64_t lp_calls = 0;
  double wall_ms = 0.0;
};

struct CheckReport {
  std::string check;
  std::string op;
  std::optional<Box> window;
  std::map<std::string, double> tolerances;
  CheckStatus status = CheckStatus::pass;
  nlohmann::json witnesses = nlohmann::json::array();
  nlohmann::json data = nlohmann::json::object();  // check-specific scalar results
  CheckStats stats;
  std::uint64_t seed = 0;

  bool ok() const { return status == CheckStatus::pass || status == CheckStatus::bounded_pass; }
};

nlohmann::json report_to_json(const CheckReport& r);
CheckReport report_from_json(const nlohmann::json& j);

// Writes atomically (temp file + rename).
void write_report(const CheckReport& r, const std::string& path);

struct DiffResult {
  bool equivalent = true;
  std::string first_difference;  // JSON-pointer-ish path
};

// Field-wise comparison ignoring wall time. With verdict_only, compares only
// check name, operator and status.
DiffResult report_diff(const nlohmann::json& a, const nlohmann::json& b, bool verdict_only = false);

nlohmann::json pair_point_json(const PairPoint& p);

}  // namespace monocalc
