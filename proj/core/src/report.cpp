#include "wsieve/report.hpp"

#include <cstdio>

#include "wsieve/constants.hpp"
#include "wsieve/errors.hpp"

namespace wsieve {

json weight_to_json(const WeightSpec& w) {
    json j;
    j["family"] = weight_family_name(w.family);
    j["u"] = w.u;
    j["v"] = w.v;
    if (w.family == WeightFamily::richert) j["lambda"] = w.lambda;
    if (w.family == WeightFamily::piecewise_linear) {
        json pts = json::array();
        for (auto [a, val] : w.breakpoints) pts.push_back(json::array({a, val}));
        j["breakpoints"] = pts;
    }
    j["lipschitz_bound"] = w.lipschitz_bound;
    return j;
}

WeightSpec weight_from_json(const json& j, int S) {
    if (!j.contains("family")) throw ConfigError("weight: missing field 'family'");
    WeightFamily family = weight_family_from_name(j.at("family").get<std::string>());
    auto need = [&](const char* field) -> double {
        if (!j.contains(field)) {
            throw ConfigError(std::string("weight: missing field '") + field + "'");
        }
        return j.at(field).get<double>();
    };
    switch (family) {
        case WeightFamily::trivial:
            return WeightSpec::trivial(need("v"), S);
        case WeightFamily::kuhn:
            return WeightSpec::kuhn(need("u"), need("v"), S);
        case WeightFamily::richert:
            return WeightSpec::richert(need("u"), need("v"), need("lambda"), S);
        case WeightFamily::piecewise_linear: {
            if (!j.contains("breakpoints")) {
                throw ConfigError("weight: missing field 'breakpoints'");
            }
            std::vector<std::pair<double, double>> pts;
            for (const auto& p : j.at("breakpoints")) {
                pts.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
            }
            return WeightSpec::piecewise_linear(need("u"), need("v"), std::move(pts), S);
        }
    }
    throw ConfigError("weight: unknown family");
}

json config_to_json(const ScenarioConfig& config) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["scenario"] = scenario_kind_name(config.kind);
    switch (config.kind) {
        case ScenarioKind::diophantine:
            j["rho"] = config.rho;
            break;
        case ScenarioKind::constant_lod:
            j["theta"] = config.theta;
            break;
        case ScenarioKind::custom:
            j["custom"] = {{"theta1", config.custom_theta1},
                           {"theta2_c0", config.custom_theta2_c0},
                           {"theta2_c1", config.custom_theta2_c1}};
            break;
    }
    j["weight"] = weight_to_json(config.weight);
    j["S"] = config.S;
    j["route"] = route_name(config.route);
    j["margin_tolerance"] = config.margin_tolerance;
    return j;
}

ScenarioConfig config_from_json(const json& j) {
    ScenarioConfig cfg;
    if (j.contains("schema_version") && j.at("schema_version").get<int>() != kSchemaVersion) {
        throw ConfigError("unsupported schema_version");
    }
    if (!j.contains("scenario")) throw ConfigError("config: missing field 'scenario'");
    cfg.kind = scenario_kind_from_name(j.at("scenario").get<std::string>());
    cfg.S = j.value("S", 3);
    switch (cfg.kind) {
        case ScenarioKind::diophantine:
            if (!j.contains("rho")) throw ConfigError("config: missing field 'rho'");
            cfg.rho = j.at("rho").get<double>();
            break;
        case ScenarioKind::constant_lod:
            if (!j.contains("theta")) throw ConfigError("config: missing field 'theta'");
            cfg.theta = j.at("theta").get<double>();
            break;
        case ScenarioKind::custom: {
            if (!j.contains("custom")) throw ConfigError("config: missing field 'custom'");
            const json& c = j.at("custom");
            cfg.custom_theta1 = c.at("theta1").get<double>();
            cfg.custom_theta2_c0 = c.at("theta2_c0").get<double>();
            cfg.custom_theta2_c1 = c.value("theta2_c1", 0.0);
            break;
        }
    }
    if (!j.contains("weight")) throw ConfigError("config: missing field 'weight'");
    cfg.weight = weight_from_json(j.at("weight"), cfg.S);
    if (j.contains("route")) cfg.route = route_from_name(j.at("route").get<std::string>());
    cfg.margin_tolerance = j.value("margin_tolerance", 1e-3);
    cfg.validate();
    return cfg;
}

json margin_report_to_json(const MarginReport& report, bool include_timings) {
    json j;
    j["sigma1"] = report.sigma1;
    j["sigma2"] = report.sigma2;
    j["margin"] = report.margin;
    j["route"] = route_name(report.route);
    j["admissible"] = report.admissible;
    j["margin_tolerance"] = report.margin_tolerance;
    j["total_quad_error"] = report.total_quad_error;
    j["sigma1_divergent"] = report.sigma1_divergent;
    json entries = json::array();
    for (const auto& e : report.per_integral) {
        json entry = {{"label", e.label}, {"value", e.value}, {"error", e.error}};
        if (include_timings) entry["elapsed_ms"] = e.elapsed_ms;
        entries.push_back(entry);
    }
    j["per_integral"] = entries;
    j["warnings"] = report.warnings;
    return j;
}

json reproduce_case_to_json(const ReproduceCase& c, bool include_timings) {
    json j;
    j["id"] = c.id;
    j["all_admissible"] = c.all_admissible;
    json runs = json::array();
    for (const auto& run : c.runs) {
        runs.push_back({{"label", run.label},
                        {"config", config_to_json(run.config)},
                        {"report", margin_report_to_json(run.report, include_timings)}});
    }
    j["runs"] = runs;
    return j;
}

json table_provenance(const SieveTables& tables) {
    json j;
    const TableSettings& s = tables.settings();
    j["grid_step"] = s.grid_step;
    j["s_max_ff"] = s.s_max_ff;
    j["s_max_omega"] = s.s_max_omega;
    j["j_max"] = s.j_max;
    j["refinement_level"] = tables.refinement_level();
    json checks;
    char buf[32];
    auto hex = [&buf](uint64_t h) {
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
        return std::string(buf);
    };
    checks["omega"] = hex(tables.make_table(FnKind::omega_b).defining_checksum);
    checks["f"] = hex(tables.make_table(FnKind::little_f).defining_checksum);
    checks["F"] = hex(tables.make_table(FnKind::big_f).defining_checksum);
    for (int jdx = 2; jdx <= s.j_max; ++jdx) {
        checks["c" + std::to_string(jdx)] =
            hex(tables.make_table(FnKind::c_j, jdx).defining_checksum);
    }
    j["checksums"] = checks;
    return j;
}

std::string dump_report(const json& j) { return j.dump(2) + "\n"; }

}  // namespace wsieve
