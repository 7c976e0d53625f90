#pragma once

#include <string>

#include <json.hpp>

#include "wsieve/scenarios.hpp"

namespace wsieve {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

json weight_to_json(const WeightSpec& w);
WeightSpec weight_from_json(const json& j, int S);

json config_to_json(const ScenarioConfig& config);
ScenarioConfig config_from_json(const json& j);

json margin_report_to_json(const MarginReport& report, bool include_timings = false);
json reproduce_case_to_json(const ReproduceCase& c, bool include_timings = false);

// Provenance block for the table bundle a run used.
json table_provenance(const SieveTables& tables);

// Canonical dump used for machine reports: sorted keys, fixed indentation,
// reproducible byte-for-byte for identical content.
std::string dump_report(const json& j);

}  // namespace wsieve
