#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "wsieve/errors.hpp"
#include "wsieve/report.hpp"

using namespace wsieve;

namespace {

ScenarioConfig sample_config() {
    ScenarioConfig cfg;
    cfg.kind = ScenarioKind::diophantine;
    cfg.rho = 0.092;
    cfg.weight = WeightSpec::kuhn(6.6, 23);
    cfg.S = 3;
    cfg.route = Route::auto_select;
    cfg.margin_tolerance = 1e-3;
    return cfg;
}

}  // namespace

TEST_CASE("scenario config round-trips through JSON") {
    ScenarioConfig cfg = sample_config();
    json j = config_to_json(cfg);
    ScenarioConfig back = config_from_json(j);
    CHECK(back.kind == cfg.kind);
    CHECK(back.rho == cfg.rho);
    CHECK(back.weight.family == cfg.weight.family);
    CHECK(back.weight.u == cfg.weight.u);
    CHECK(back.weight.v == cfg.weight.v);
    CHECK(back.S == cfg.S);
    CHECK(back.route == cfg.route);
    CHECK(back.margin_tolerance == cfg.margin_tolerance);
}

TEST_CASE("custom and richert configs round-trip too") {
    ScenarioConfig cfg;
    cfg.kind = ScenarioKind::custom;
    cfg.custom_theta1 = 0.2413333333333333;
    cfg.custom_theta2_c0 = 0.408;
    cfg.custom_theta2_c1 = -0.5;
    cfg.weight = WeightSpec::richert(4.1, 19.2, 1.0 / 1.4);
    cfg.route = Route::small_r;
    json j = config_to_json(cfg);
    ScenarioConfig back = config_from_json(j);
    CHECK(back.custom_theta1 == cfg.custom_theta1);
    CHECK(back.custom_theta2_c1 == cfg.custom_theta2_c1);
    CHECK(back.weight.lambda == cfg.weight.lambda);
    CHECK(back.route == Route::small_r);
}

TEST_CASE("malformed configs name the offending field") {
    json j = config_to_json(sample_config());
    j.erase("rho");
    try {
        config_from_json(j);
        FAIL("expected ConfigError");
    } catch (const ConfigError& ex) {
        CHECK(std::string(ex.what()).find("rho") != std::string::npos);
    }
    json k = config_to_json(sample_config());
    k["weight"].erase("v");
    try {
        config_from_json(k);
        FAIL("expected ConfigError");
    } catch (const ConfigError& ex) {
        CHECK(std::string(ex.what()).find("'v'") != std::string::npos);
    }
}

TEST_CASE("numeric fields survive a dump/parse cycle exactly") {
    ScenarioConfig cfg = sample_config();
    MarginReport rep = run_margin(cfg);
    json j = margin_report_to_json(rep);
    json back = json::parse(dump_report(j));
    for (const char* field : {"sigma1", "sigma2", "margin", "total_quad_error"}) {
        double orig = j.at(field).get<double>();
        double round = back.at(field).get<double>();
        CHECK(std::abs(round - orig) <= 1e-12 * std::max(1.0, std::abs(orig)));
    }
    REQUIRE(back.at("per_integral").size() == j.at("per_integral").size());
    for (std::size_t i = 0; i < j.at("per_integral").size(); ++i) {
        CHECK(back.at("per_integral")[i].at("value").get<double>() ==
              j.at("per_integral")[i].at("value").get<double>());
    }
}

TEST_CASE("the divergence sentinel survives serialization") {
    json j;
    j["sigma1"] = kDivergentSigma1;
    json back = json::parse(dump_report(j));
    CHECK(back.at("sigma1").get<double>() == kDivergentSigma1);
}

TEST_CASE("table provenance lists checksums") {
    auto tables = shared_tables();
    json j = table_provenance(*tables);
    CHECK(j.at("refinement_level").get<int>() >= 1);
    CHECK(j.at("checksums").contains("omega"));
    CHECK(j.at("checksums").contains("c2"));
    CHECK(j.at("checksums").at("omega").get<std::string>().size() == 16);
}

TEST_CASE("dump is canonical: key order does not depend on insertion order") {
    json a;
    a["zeta"] = 1;
    a["alpha"] = 2;
    json b;
    b["alpha"] = 2;
    b["zeta"] = 1;
    CHECK(dump_report(a) == dump_report(b));
}

TEST_CASE("piecewise weight configs round-trip their breakpoints") {
    ScenarioConfig cfg;
    cfg.kind = ScenarioKind::constant_lod;
    cfg.theta = 0.3;
    cfg.weight = WeightSpec::piecewise_linear(
        5, 10, {{0.1, 0.0}, {0.13, 0.4}, {0.2, 0.0}});
    ScenarioConfig back = config_from_json(config_to_json(cfg));
    REQUIRE(back.weight.breakpoints.size() == 3);
    CHECK(back.weight.breakpoints[1].first == 0.13);
    CHECK(back.weight.breakpoints[1].second == 0.4);
    CHECK(back.weight.lipschitz_bound == cfg.weight.lipschitz_bound);
}
