#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "nsdamp/diagnostics.hpp"

namespace nsdamp {

/// Column order of the budget CSV. Integrals are prefixed with "int_".
/// h1_envelope / h1_residual are empty where no H^1 bound applies, and every
/// numeric field is empty on a trailing blow-up row.
const std::vector<std::string>& budget_csv_columns();

/// Header, then one line per row. Numbers use the shortest representation
/// that parses back to the same binary64 value.
void write_budget_csv(const BudgetSeries& series, std::ostream& sink);

/// Inverse of write_budget_csv. The damping spec is not stored in the CSV.
BudgetSeries read_budget_csv(std::istream& source, const DampingSpec& damping);

std::string format_double(double v);

nlohmann::json to_json(const L2Report& r);
nlohmann::json to_json(const H1Report& r);
nlohmann::json to_json(const GronwallReport& r);
nlohmann::json to_json(const StabilityReport& r);

struct RunManifest {
    nlohmann::json config;
    std::string code_version;
    std::string start_time;
    std::string end_time;
    bool blew_up = false;
    std::string blowup_message;
    std::vector<std::string> outputs;
    nlohmann::json checks;
};

std::string code_version();
std::string utc_timestamp();

nlohmann::json to_json(const RunManifest& m);
/// Writes `path` atomically (temporary file + rename).
void write_manifest(const RunManifest& m, const std::string& path);
RunManifest read_manifest(const std::string& path);

}  // namespace nsdamp
