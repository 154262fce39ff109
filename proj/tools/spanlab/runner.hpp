#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "spanlab/verdict.hpp"

namespace spanlab::cli {

inline constexpr int schema_version = 1;
inline constexpr std::uint64_t default_seed = 20260101;

const char* tool_version();

/// Checks the request against the schema of its check. Throws SchemaError.
void validate_request(const nlohmann::json& request);

/// Runs one request. Never throws: schema and domain errors become an
/// "error" verdict, resource exhaustion an "inconclusive" one.
nlohmann::json run(const nlohmann::json& request);

Verdict report_verdict(const nlohmann::json& report);

/// The report with its timing field removed, for byte comparisons.
nlohmann::json without_timing(nlohmann::json report);

struct SuiteResult {
  std::vector<nlohmann::json> reports;
  nlohmann::json summary;
  Verdict verdict = Verdict::verified;
};

/// Requests run on a small worker pool; reports come back in request order.
SuiteResult run_suite(const nlohmann::json& config, unsigned workers = 0);

nlohmann::json load_json_file(const std::string& path);

/// Stable text form of a report (sorted keys, two-space indent, newline).
std::string dump(const nlohmann::json& report);

} // namespace spanlab::cli
