#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "wsieve/bounds.hpp"
#include "wsieve/constants.hpp"
#include "wsieve/errors.hpp"
#include "wsieve/report.hpp"
#include "wsieve/scenarios.hpp"

namespace fs = std::filesystem;
using namespace wsieve;

namespace {

constexpr int kExitVerdict = 1;
constexpr int kExitConfig = 2;
constexpr int kExitBudget = 3;

struct GlobalFlags {
    int threads = 0;
    std::string cache_dir;
    bool force = false;
    bool timings = false;
};

std::string resolve_cache_dir(const GlobalFlags& g) {
    if (!g.cache_dir.empty()) return g.cache_dir;
    if (const char* env = std::getenv("WSIEVE_CACHE_DIR")) return env;
    return {};
}

json load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& ex) {
        throw ConfigError("config is not valid JSON: " + std::string(ex.what()));
    }
    return j;
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open output file: " + path);
    out << dump_report(j);
}

void print_margin_report(std::ostream& os, const std::string& label, const MarginReport& rep) {
    os << label << ":\n";
    char line[256];
    std::snprintf(line, sizeof line,
                  "  sigma1 = %.8f\n  sigma2 = %.8f\n  margin = %+.8f   (tolerance %g)\n",
                  rep.sigma1, rep.sigma2, rep.margin, rep.margin_tolerance);
    os << line;
    os << "  route = " << route_name(rep.route)
       << "   admissible = " << (rep.admissible ? "yes" : "no")
       << "   quad error = " << rep.total_quad_error << "\n";
    for (const auto& e : rep.per_integral) {
        std::snprintf(line, sizeof line, "    %-28s %.9g  (err %.2e)\n", e.label.c_str(),
                      e.value, e.error);
        os << line;
    }
    for (const auto& w : rep.warnings) os << "    warning: " << w << "\n";
}

json run_report_shell(const json& inner, const SieveTables* tables) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["tool_version"] = kToolVersion;
    for (auto it = inner.begin(); it != inner.end(); ++it) j[it.key()] = it.value();
    if (tables) j["tables"] = table_provenance(*tables);
    return j;
}

// ---- eval-fn ----------------------------------------------------------

double eval_from_tables(const SieveTables& tables, FnKind kind, int jidx, double s) {
    switch (kind) {
        case FnKind::omega_b: return tables.buchstab(s);
        case FnKind::little_f: return tables.linear_sieve_f(s);
        case FnKind::big_f: return tables.linear_sieve_F(s);
        case FnKind::c_j: return tables.little_c(jidx, s);
        case FnKind::big_c_j: return tables.big_C(jidx, s);
    }
    throw ConfigError("unknown function kind");
}

int cmd_eval_fn(const GlobalFlags& g, const std::string& fn, int jidx, double s, double step) {
    FnKind kind = fn_kind_from_name(fn);
    const bool indexed = kind == FnKind::c_j || kind == FnKind::big_c_j;
    if (indexed && jidx <= 0) throw ConfigError("--j is required for c_j / C_J");

    const std::string cache = resolve_cache_dir(g);
    if (!cache.empty() && !g.force) {
        TableSettings defaults;
        FunctionTable stub;
        stub.kind = kind;
        stub.index_j = indexed ? jidx : 0;
        stub.grid_step = step;
        stub.s_max = (kind == FnKind::little_f || kind == FnKind::big_f) ? defaults.s_max_ff
                                                                         : defaults.s_max_omega;
        fs::path file = fs::path(cache) / table_cache_filename(stub);
        if (fs::exists(file)) {
            FunctionTable t = read_table_cache_file(file.string());
            uint64_t want = table_checksum(kind, stub.index_j, t.grid_step, t.s_max);
            if (t.defining_checksum != want) {
                throw ConfigError("stale table cache (checksum mismatch): " + file.string() +
                                  "; re-run 'tabulate' or pass --force to recompute");
            }
            if (s >= t.grid_start && s <= t.s_max) {
                std::printf("%.10f\n", t.interpolate(s));
                return 0;
            }
        }
    }
    TableSettings st;
    st.grid_step = step;
    if (kind == FnKind::little_f || kind == FnKind::big_f) {
        st.s_max_ff = std::max(st.s_max_ff, std::ceil(s) + 1);
    } else {
        st.s_max_omega = std::max(st.s_max_omega, std::ceil(s) + 1);
    }
    auto tables = shared_tables(st);
    std::printf("%.10f\n", eval_from_tables(*tables, kind, jidx, s));
    return 0;
}

// ---- tabulate ---------------------------------------------------------

int cmd_tabulate(const GlobalFlags&, const std::string& out_dir, double step, bool csv) {
    TableSettings st;
    st.grid_step = step;
    SieveTables tables(st);
    fs::create_directories(out_dir);
    json manifest;
    manifest["schema_version"] = kSchemaVersion;
    manifest["tool_version"] = kToolVersion;
    manifest["grid_step"] = st.grid_step;
    manifest["refinement_level"] = tables.refinement_level();
    json files;
    auto emit = [&](FnKind kind, int jidx) {
        FunctionTable t = tables.make_table(kind, jidx);
        fs::path file = fs::path(out_dir) / table_cache_filename(t);
        write_table_cache_file(t, file.string());
        char hex[32];
        std::snprintf(hex, sizeof hex, "%016llx",
                      static_cast<unsigned long long>(t.defining_checksum));
        files[file.filename().string()] = hex;
        if (csv) {
            std::ofstream cfile(file.replace_extension(".csv"));
            write_table_csv(t, cfile);
        }
    };
    emit(FnKind::omega_b, 0);
    emit(FnKind::little_f, 0);
    emit(FnKind::big_f, 0);
    for (int j = 2; j <= tables.settings().j_max; ++j) emit(FnKind::c_j, j);
    for (int J = 1; J <= tables.settings().j_max; ++J) emit(FnKind::big_c_j, J);
    manifest["files"] = files;
    write_json_file((fs::path(out_dir) / "manifest.json").string(), manifest);
    std::cout << "wrote " << files.size() << " tables to " << out_dir
              << " (refinement level " << tables.refinement_level() << ")\n";
    return 0;
}

// ---- margin -----------------------------------------------------------

int cmd_margin(const GlobalFlags& g, const std::string& config_path,
               const std::string& json_out, const std::string& sweep_expr,
               const std::string& sweep_out) {
    ScenarioConfig cfg = config_from_json(load_config_file(config_path));
    cfg.quad.threads = g.threads;
    auto t0 = std::chrono::steady_clock::now();
    MarginReport rep = run_margin(cfg);
    auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0);

    print_margin_report(std::cout, "margin (" + std::string(scenario_kind_name(cfg.kind)) + ")",
                        rep);
    if (g.timings) std::cout << "  wall clock: " << ms.count() << " ms\n";

    if (!sweep_expr.empty()) {
        double lo, hi, step;
        if (std::sscanf(sweep_expr.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3 || step <= 0) {
            throw ConfigError("--sweep expects LO:HI:STEP");
        }
        std::vector<double> rhos;
        for (double r = lo; r <= hi + 1e-12; r += step) rhos.push_back(r);
        MarginOptions mo;
        mo.margin_tolerance = cfg.margin_tolerance;
        mo.quad = cfg.quad;
        auto pts = rho_sweep(cfg.weight, cfg.S, cfg.route, rhos, mo);
        std::ostream* os = &std::cout;
        std::ofstream file;
        if (!sweep_out.empty()) {
            file.open(sweep_out);
            if (!file) throw ConfigError("cannot open sweep output: " + sweep_out);
            os = &file;
        }
        (*os) << "rho,sigma1,sigma2,margin\n";
        char line[160];
        for (const auto& p : pts) {
            std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g\n", p.rho, p.sigma1,
                          p.sigma2, p.margin);
            (*os) << line;
        }
    }

    if (!json_out.empty()) {
        json inner;
        inner["config"] = config_to_json(cfg);
        inner["reports"] = json::array(
            {json{{"label", "margin"}, {"report", margin_report_to_json(rep, g.timings)}}});
        if (g.timings) inner["timings"] = {{"total_ms", ms.count()}};
        auto tables = tables_for(build_theta(cfg), cfg.weight);
        write_json_file(json_out, run_report_shell(inner, tables.get()));
    }
    return rep.admissible ? 0 : kExitVerdict;
}

// ---- optimize ---------------------------------------------------------

int cmd_optimize(const GlobalFlags& g, const std::string& config_path,
                 const std::string& json_out) {
    json j = load_config_file(config_path);
    if (!j.contains("optimize")) throw ConfigError("optimize config needs an 'optimize' section");
    const json& o = j.at("optimize");
    std::string objective = o.value("objective", "");
    json inner;
    bool ok = false;
    if (objective == "max_rho") {
        RhoSearchSettings st;
        st.family = weight_family_from_name(o.at("family").get<std::string>());
        st.S = o.value("S", 3);
        st.u_min = o.value("u_min", 0.0);
        st.u_max = o.value("u_max", 0.0);
        st.u_step = o.value("u_step", 0.1);
        st.v_min = o.at("v_min").get<double>();
        st.v_max = o.at("v_max").get<double>();
        st.v_step = o.value("v_step", 0.1);
        st.lambda_min = o.value("lambda_min", 0.0);
        st.lambda_max = o.value("lambda_max", 0.0);
        st.lambda_step = o.value("lambda_step", 0.1);
        st.rho_grid = o.value("rho_grid", 1e-3);
        st.rho_bisect_tol = o.value("rho_bisect_tol", 1e-4);
        st.refine_passes = o.value("refine_passes", 1);
        st.margin_tolerance = o.value("margin_tolerance", 1e-3);
        if (o.contains("route")) st.route = route_from_name(o.at("route").get<std::string>());
        st.quad.threads = g.threads;
        RhoSearchResult res = max_admissible_rho(st);
        ok = res.found;
        if (res.found) {
            std::cout << "rho_star = " << res.rho_star << " at weight "
                      << weight_family_name(res.best_weight.family) << " u=" << res.best_weight.u
                      << " v=" << res.best_weight.v;
            if (res.best_weight.family == WeightFamily::richert) {
                std::cout << " lambda=" << res.best_weight.lambda;
            }
            std::cout << "\n";
            print_margin_report(std::cout, "margin at rho_star", res.report);
            inner["result"] = {{"found", true},
                               {"rho_star", res.rho_star},
                               {"weight", weight_to_json(res.best_weight)},
                               {"report", margin_report_to_json(res.report)}};
        } else {
            std::cout << "no admissible point in the box; best margin seen = "
                      << res.best_margin_seen << "\n";
            inner["result"] = {{"found", false}, {"best_margin_seen", res.best_margin_seen}};
        }
    } else if (objective == "min_theta") {
        int S = o.value("S", 3);
        WeightSpec w = weight_from_json(o.at("weight"), S);
        MarginOptions mo;
        mo.margin_tolerance = o.value("margin_tolerance", 1e-3);
        mo.quad.threads = g.threads;
        ThetaSearchResult res = min_admissible_theta(w, S, mo, o.value("bisect_tol", 1e-4));
        ok = res.found;
        if (res.found) {
            std::cout << "theta_star = " << res.theta_star << "\n";
            print_margin_report(std::cout, "margin at theta_star", res.report);
            inner["result"] = {{"found", true},
                               {"theta_star", res.theta_star},
                               {"report", margin_report_to_json(res.report)}};
        } else {
            std::cout << "not admissible even at theta = 0.999; best margin seen = "
                      << res.best_margin_seen << "\n";
            inner["result"] = {{"found", false}, {"best_margin_seen", res.best_margin_seen}};
        }
    } else {
        throw ConfigError("optimize.objective must be 'max_rho' or 'min_theta'");
    }
    if (!json_out.empty()) {
        inner["config"] = j;
        write_json_file(json_out, run_report_shell(inner, nullptr));
    }
    return ok ? 0 : kExitVerdict;
}

// ---- reproduce --------------------------------------------------------

int cmd_reproduce(const GlobalFlags& g, const std::string& case_id, bool all,
                  const std::string& json_out) {
    std::vector<std::string> ids;
    if (all) {
        ids = reproduce_case_ids();
    } else if (!case_id.empty()) {
        ids.push_back(case_id);
    } else {
        throw ConfigError("reproduce needs --case ID or --all");
    }
    QuadOptions quad;
    quad.threads = g.threads;
    bool all_ok = true;
    json cases = json::array();
    double total_ms = 0;
    for (const auto& id : ids) {
        auto t0 = std::chrono::steady_clock::now();
        ReproduceCase rc = reproduce(id, quad);
        double ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count();
        total_ms += ms;
        all_ok = all_ok && rc.all_admissible;
        for (const auto& run : rc.runs) {
            print_margin_report(std::cout, rc.id + " [" + run.label + "]", run.report);
        }
        if (g.timings) std::cout << "  wall clock: " << ms << " ms\n";
        cases.push_back(reproduce_case_to_json(rc, g.timings));
    }
    std::cout << (all_ok ? "all cases admissible\n" : "SOME CASES NOT ADMISSIBLE\n");
    if (!json_out.empty()) {
        json inner;
        inner["cases"] = cases;
        if (g.timings) inner["timings"] = {{"total_ms", total_ms}};
        auto tables = shared_tables();
        write_json_file(json_out, run_report_shell(inner, tables.get()));
    }
    return all_ok ? 0 : kExitVerdict;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"weighted-sieve margin calculator"};
    app.require_subcommand(1);
    GlobalFlags g;
    app.add_option("--threads", g.threads, "worker thread cap (0 = hardware)");
    app.add_option("--cache-dir", g.cache_dir, "table cache directory (or WSIEVE_CACHE_DIR)");
    app.add_flag("--force", g.force, "ignore stale table caches and recompute");
    app.add_flag("--timings", g.timings, "include wall-clock timings in reports");

    auto* evalfn = app.add_subcommand("eval-fn", "evaluate one special function");
    std::string fn;
    int jidx = 0;
    double s = 0, step = 1e-3;
    evalfn->add_option("--fn", fn, "f|F|omega|c|C")->required();
    evalfn->add_option("--j", jidx, "index j for c_j / C_J");
    evalfn->add_option("--s", s, "argument")->required();
    evalfn->add_option("--step", step, "grid step");

    auto* tab = app.add_subcommand("tabulate", "build and cache all tables");
    std::string out_dir;
    double tab_step = 1e-3;
    bool tab_csv = false;
    tab->add_option("--out", out_dir, "output directory")->required();
    tab->add_option("--step", tab_step, "grid step");
    tab->add_flag("--csv", tab_csv, "also write CSV exports");

    auto* mar = app.add_subcommand("margin", "run one scenario");
    std::string mar_config, mar_json, sweep_expr, sweep_out;
    mar->add_option("--config", mar_config, "scenario config JSON")->required();
    mar->add_option("--json", mar_json, "write machine report here");
    mar->add_option("--sweep", sweep_expr, "rho sweep LO:HI:STEP (CSV rho,sigma1,sigma2,margin)");
    mar->add_option("--sweep-out", sweep_out, "sweep CSV path (default stdout)");

    auto* opt = app.add_subcommand("optimize", "search for the best admissible rho / theta");
    std::string opt_config, opt_json;
    opt->add_option("--config", opt_config, "config JSON with an 'optimize' section")->required();
    opt->add_option("--json", opt_json, "write machine report here");

    auto* rep = app.add_subcommand("reproduce", "run the fixed reproduction suite");
    std::string case_id, rep_json;
    bool rep_all = false;
    rep->add_option("--case", case_id, "one case id");
    rep->add_flag("--all", rep_all, "run every case");
    rep->add_option("--json", rep_json, "write machine report here");

    // let the global flags appear after the subcommand name too
    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        if (evalfn->parsed()) return cmd_eval_fn(g, fn, jidx, s, step);
        if (tab->parsed()) return cmd_tabulate(g, out_dir, tab_step, tab_csv);
        if (mar->parsed()) return cmd_margin(g, mar_config, mar_json, sweep_expr, sweep_out);
        if (opt->parsed()) return cmd_optimize(g, opt_config, opt_json);
        if (rep->parsed()) return cmd_reproduce(g, case_id, rep_all, rep_json);
    } catch (const ConfigError& ex) {
        std::cerr << "config error: " << ex.what() << "\n";
        return kExitConfig;
    } catch (const BudgetExceededError& ex) {
        std::cerr << "numeric budget exceeded: " << ex.what() << " (partial value "
                  << ex.partial_value << ")\n";
        return kExitBudget;
    } catch (const ConvergenceError& ex) {
        std::cerr << "convergence failure: " << ex.what() << " (last sup delta "
                  << ex.last_sup_delta << ")\n";
        return kExitBudget;
    } catch (const Error& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitConfig;
    }
    return 0;
}
