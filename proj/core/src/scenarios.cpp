#include "wsieve/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "wsieve/errors.hpp"

namespace wsieve {

namespace {

// Harman's parameter family for the Diophantine problem, at vanishing slack:
// v = 4/theta1, u = 1/theta1, lambda = 1/(5 - u).
WeightSpec harman_parameters(double rho) {
    const double theta1 = 1.0 / 3.0 - rho;
    const double v = 4.0 / theta1;
    const double u = 1.0 / theta1;
    return WeightSpec::richert(u, v, 1.0 / (5.0 - u), 3);
}

ThetaSpec diophantine_theta(double rho, const WeightSpec& w, int S) {
    ThetaSpec t;
    t.theta1 = 1.0 / 3.0 - rho;
    t.theta2_c0 = 0.5 - rho;
    t.theta2_c1 = -0.5;
    t.valid_lo = 1.0 / w.v;
    t.valid_hi = 1.0 / (S + 1.0);
    return t;
}

bool report_admissible(const ScenarioConfig& cfg) {
    return run_margin(cfg).admissible;
}

}  // namespace

const char* scenario_kind_name(ScenarioKind k) {
    switch (k) {
        case ScenarioKind::diophantine: return "diophantine";
        case ScenarioKind::constant_lod: return "constant_lod";
        case ScenarioKind::custom: return "custom";
    }
    return "?";
}

ScenarioKind scenario_kind_from_name(const std::string& name) {
    if (name == "diophantine") return ScenarioKind::diophantine;
    if (name == "constant_lod") return ScenarioKind::constant_lod;
    if (name == "custom") return ScenarioKind::custom;
    throw ConfigError("unknown scenario kind '" + name + "'");
}

void ScenarioConfig::validate() const {
    weight.validate();
    if (S < 1) throw ConfigError("S must be a positive integer");
    if (margin_tolerance <= 0) throw ConfigError("margin_tolerance must be positive");
    switch (kind) {
        case ScenarioKind::diophantine:
            if (!(rho >= 0.0 && rho < 0.2)) {
                throw ConfigError("diophantine scenario requires rho in [0, 1/5)");
            }
            break;
        case ScenarioKind::constant_lod:
            if (!(theta > 0.0 && theta < 1.0)) {
                throw ConfigError("constant_lod scenario requires theta in (0, 1)");
            }
            break;
        case ScenarioKind::custom:
            break;
    }
}

ThetaSpec build_theta(const ScenarioConfig& config) {
    config.validate();
    ThetaSpec t;
    t.valid_lo = 1.0 / config.weight.v;
    t.valid_hi = 1.0 / (config.S + 1.0);
    switch (config.kind) {
        case ScenarioKind::diophantine:
            t.theta1 = 1.0 / 3.0 - config.rho;
            t.theta2_c0 = 0.5 - config.rho;
            t.theta2_c1 = -0.5;
            break;
        case ScenarioKind::constant_lod:
            t.theta1 = config.theta;
            t.theta2_c0 = config.theta;
            t.theta2_c1 = 0.0;
            break;
        case ScenarioKind::custom:
            t.theta1 = config.custom_theta1;
            t.theta2_c0 = config.custom_theta2_c0;
            t.theta2_c1 = config.custom_theta2_c1;
            break;
    }
    return t;
}

MarginReport run_margin(const ScenarioConfig& config) {
    ThetaSpec theta = build_theta(config);
    MarginOptions options;
    options.margin_tolerance = config.margin_tolerance;
    options.quad = config.quad;
    return margin(theta, config.weight, config.S, config.route, options);
}

std::vector<SweepPoint> rho_sweep(const WeightSpec& weight, int S, Route route,
                                  const std::vector<double>& rhos,
                                  const MarginOptions& options) {
    std::vector<SweepPoint> out;
    out.reserve(rhos.size());
    for (double rho : rhos) {
        ThetaSpec theta = diophantine_theta(rho, weight, S);
        MarginReport rep = margin(theta, weight, S, route, options);
        out.push_back({rho, rep.sigma1, rep.sigma2, rep.margin});
    }
    return out;
}

namespace {

// Largest admissible rho for one weight spec: locate on the coarse rho grid,
// then bisect to tolerance (margin is nonincreasing in rho).
std::optional<double> best_rho_for(const WeightSpec& w, const RhoSearchSettings& st,
                                   double* best_margin) {
    auto admissible = [&](double rho) {
        ThetaSpec theta = diophantine_theta(rho, w, st.S);
        MarginOptions mo;
        mo.margin_tolerance = st.margin_tolerance;
        mo.quad = st.quad;
        try {
            MarginReport rep = margin(theta, w, st.S, st.route, mo);
            if (best_margin) *best_margin = std::max(*best_margin, rep.margin);
            return rep.admissible;
        } catch (const Error&) {
            return false;
        }
    };
    if (!admissible(st.rho_min)) return std::nullopt;
    if (admissible(st.rho_max)) return st.rho_max;
    // coarse grid bracket by index bisection
    long n = std::lround(std::floor((st.rho_max - st.rho_min) / st.rho_grid));
    long lo = 0, hi = n + 1;  // grid point 0 admissible; beyond-grid point inadmissible
    auto rho_at = [&](long i) { return std::min(st.rho_min + i * st.rho_grid, st.rho_max); };
    while (hi - lo > 1) {
        long mid = (lo + hi) / 2;
        if (admissible(rho_at(mid))) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    double a = rho_at(lo), b = rho_at(hi);
    while (b - a > st.rho_bisect_tol) {
        double mid = 0.5 * (a + b);
        if (admissible(mid)) {
            a = mid;
        } else {
            b = mid;
        }
    }
    return a;
}

std::vector<double> lattice(double lo, double hi, double step) {
    std::vector<double> pts;
    if (hi < lo) return pts;
    long n = std::lround(std::floor((hi - lo) / step + 1e-9));
    for (long i = 0; i <= n; ++i) pts.push_back(lo + i * step);
    if (pts.empty() || std::abs(pts.back() - hi) > 1e-12) pts.push_back(hi);
    return pts;
}

std::optional<WeightSpec> make_weight(const RhoSearchSettings& st, double u, double v,
                                      double lambda) {
    try {
        switch (st.family) {
            case WeightFamily::trivial: return WeightSpec::trivial(v, st.S);
            case WeightFamily::kuhn: return WeightSpec::kuhn(u, v, st.S);
            case WeightFamily::richert: return WeightSpec::richert(u, v, lambda, st.S);
            case WeightFamily::piecewise_linear: return std::nullopt;
        }
    } catch (const ConfigError&) {
        return std::nullopt;
    }
    return std::nullopt;
}

}  // namespace

RhoSearchResult max_admissible_rho(const RhoSearchSettings& settings) {
    RhoSearchResult result;
    const bool uses_u = settings.family != WeightFamily::trivial;
    const bool uses_lambda = settings.family == WeightFamily::richert;

    struct Candidate {
        double rho, u, v, lambda;
    };
    std::optional<Candidate> best;

    auto consider = [&](double u, double v, double lambda) {
        auto w = make_weight(settings, u, v, lambda);
        if (!w) return;
        double bm = -1e300;
        auto rho = best_rho_for(*w, settings, &bm);
        result.best_margin_seen = std::max(result.best_margin_seen, bm);
        if (!rho) return;
        Candidate c{*rho, u, v, lambda};
        if (!best || c.rho > best->rho + 1e-12 ||
            (std::abs(c.rho - best->rho) <= 1e-12 &&
             std::tie(c.u, c.v, c.lambda) < std::tie(best->u, best->v, best->lambda))) {
            best = c;
        }
    };

    auto scan = [&](double u0, double u1, double us, double v0, double v1, double vs,
                    double l0, double l1, double ls) {
        for (double v : lattice(v0, v1, vs)) {
            if (uses_u) {
                for (double u : lattice(u0, u1, us)) {
                    if (uses_lambda) {
                        for (double lam : lattice(l0, l1, ls)) consider(u, v, lam);
                    } else {
                        consider(u, v, 0.0);
                    }
                }
            } else {
                consider(v, v, 0.0);
            }
        }
    };

    scan(settings.u_min, settings.u_max, settings.u_step, settings.v_min, settings.v_max,
         settings.v_step, settings.lambda_min, settings.lambda_max, settings.lambda_step);

    double us = settings.u_step, vs = settings.v_step, ls = settings.lambda_step;
    for (int pass = 0; pass < settings.refine_passes && best; ++pass) {
        us /= 2;
        vs /= 2;
        ls /= 2;
        Candidate center = *best;
        scan(std::max(settings.u_min, center.u - us * 2),
             std::min(settings.u_max, center.u + us * 2), us,
             std::max(settings.v_min, center.v - vs * 2),
             std::min(settings.v_max, center.v + vs * 2), vs,
             std::max(settings.lambda_min, center.lambda - ls * 2),
             std::min(settings.lambda_max, center.lambda + ls * 2), ls);
    }

    if (!best) return result;
    result.found = true;
    result.rho_star = best->rho;
    result.best_weight = *make_weight(settings, best->u, best->v, best->lambda);
    ThetaSpec theta = diophantine_theta(best->rho, result.best_weight, settings.S);
    MarginOptions mo;
    mo.margin_tolerance = settings.margin_tolerance;
    mo.quad = settings.quad;
    result.report = margin(theta, result.best_weight, settings.S, settings.route, mo);
    return result;
}

ThetaSearchResult min_admissible_theta(const WeightSpec& weight, int S,
                                       const MarginOptions& options, double bisect_tol) {
    ThetaSearchResult result;
    auto eval = [&](double theta) -> std::optional<MarginReport> {
        ScenarioConfig cfg;
        cfg.kind = ScenarioKind::constant_lod;
        cfg.theta = theta;
        cfg.weight = weight;
        cfg.S = S;
        cfg.margin_tolerance = options.margin_tolerance;
        cfg.quad = options.quad;
        try {
            return run_margin(cfg);
        } catch (const Error&) {
            return std::nullopt;
        }
    };
    const double hi0 = 0.999;
    auto top = eval(hi0);
    if (!top || !top->admissible) {
        if (top) result.best_margin_seen = top->margin;
        return result;  // not admissible even at theta = 0.999
    }
    double lo = kThetaDelta + 1e-3, hi = hi0;
    MarginReport hi_report = *top;
    auto bottom = eval(lo);
    if (bottom && bottom->admissible) {
        result.found = true;
        result.theta_star = lo;
        result.report = *bottom;
        return result;
    }
    while (hi - lo > bisect_tol) {
        double mid = 0.5 * (lo + hi);
        auto rep = eval(mid);
        if (rep && rep->admissible) {
            hi = mid;
            hi_report = *rep;
        } else {
            lo = mid;
            if (rep) result.best_margin_seen = std::max(result.best_margin_seen, rep->margin);
        }
    }
    result.found = true;
    result.theta_star = hi;
    result.report = hi_report;
    return result;
}

const std::vector<std::string>& reproduce_case_ids() {
    static const std::vector<std::string> ids = {
        "harman-original",  "harman-richert-1-25", "harman-richert-0075",
        "harman-trivial",   "harman-kuhn",         "const-lod-267",
    };
    return ids;
}

ReproduceCase reproduce(const std::string& case_id, const QuadOptions& quad) {
    ReproduceCase out;
    out.id = case_id;
    auto add = [&](const std::string& label, ScenarioConfig cfg) {
        cfg.quad = quad;
        ReproduceRun run;
        run.label = label;
        run.config = cfg;
        run.report = run_margin(cfg);
        out.runs.push_back(std::move(run));
    };

    if (case_id == "harman-original") {
        for (double rho : {1.0 / 300.0, 1.0 / 150.0}) {
            ScenarioConfig cfg;
            cfg.kind = ScenarioKind::diophantine;
            cfg.rho = rho;
            cfg.weight = harman_parameters(rho);
            cfg.route = Route::harman_pointwise;
            add(rho < 1.0 / 200.0 ? "rho=1/300" : "rho=1/150", cfg);
        }
    } else if (case_id == "harman-richert-1-25") {
        ScenarioConfig cfg;
        cfg.kind = ScenarioKind::diophantine;
        cfg.rho = 1.0 / 25.0;
        cfg.weight = harman_parameters(cfg.rho);
        cfg.route = Route::small_r;
        add("rho=1/25", cfg);
    } else if (case_id == "harman-richert-0075") {
        ScenarioConfig cfg;
        cfg.kind = ScenarioKind::diophantine;
        cfg.rho = 0.075;
        cfg.weight = WeightSpec::richert(4.1, 19.2, 1.0 / 1.4, 3);
        cfg.route = Route::small_r;
        add("rho=0.075", cfg);
    } else if (case_id == "harman-trivial") {
        ScenarioConfig cfg;
        cfg.kind = ScenarioKind::diophantine;
        cfg.rho = 1.0 / 16.0;
        cfg.weight = WeightSpec::trivial(10.8, 3);
        add("rho=1/16", cfg);
    } else if (case_id == "harman-kuhn") {
        ScenarioConfig cfg;
        cfg.kind = ScenarioKind::diophantine;
        cfg.rho = 0.092;
        cfg.weight = WeightSpec::kuhn(6.6, 23.0, 3);
        add("rho=0.092", cfg);
    } else if (case_id == "const-lod-267") {
        ScenarioConfig cfg;
        cfg.kind = ScenarioKind::constant_lod;
        cfg.theta = 0.267;
        cfg.weight = WeightSpec::kuhn(6.0, 20.0, 3);
        add("theta=0.267", cfg);
    } else {
        throw ConfigError("unknown reproduction case '" + case_id + "'");
    }

    out.all_admissible = true;
    for (const auto& run : out.runs) out.all_admissible = out.all_admissible && run.report.admissible;
    return out;
}

}  // namespace wsieve
