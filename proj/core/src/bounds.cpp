#include "wsieve/bounds.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "wsieve/constants.hpp"
#include "wsieve/errors.hpp"
#include "wsieve/stable_sum.hpp"

namespace wsieve {

namespace {

void log_entry(EvalContext& ctx, const std::string& label, double value, double error,
               double elapsed_ms = 0.0) {
    if (ctx.log) ctx.log->push_back({label, value, error, elapsed_ms});
}

std::shared_ptr<const SieveTables> ensure_tables(const ThetaSpec& theta, const WeightSpec& w,
                                                 EvalContext& ctx) {
    if (!ctx.tables) ctx.tables = tables_for(theta, w);
    return ctx.tables;
}

IntegralTask base_task(IntegrandId id, const ThetaSpec& theta, const WeightSpec& w,
                       EvalContext& ctx) {
    IntegralTask task;
    task.integrand = id;
    task.params.weight = w;
    task.params.theta1 = theta.theta1;
    task.params.theta2_c0 = theta.theta2_c0;
    task.params.theta2_c1 = theta.theta2_c1;
    task.params.S = w.S;
    task.params.tables = ctx.tables;
    return task;
}

// Upper box bound for ordered variable j (0-based) of a J-term region with
// the budget sum + a_last <= 1: remaining variables at least as large.
double ordered_cap(int j, int d, double lo) {
    return (1.0 - static_cast<double>(j) * lo) / static_cast<double>(d - j + 1);
}

double run_task(IntegralTask& task, EvalContext& ctx, const std::string& label,
                double* err_out) {
    auto t0 = std::chrono::steady_clock::now();
    IntegrateResult res = integrate(task, ctx.quad);
    double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    log_entry(ctx, label, res.value, res.error, ms);
    if (err_out) *err_out += res.error;
    return res.value;
}

}  // namespace

const char* route_name(Route r) {
    switch (r) {
        case Route::auto_select: return "auto";
        case Route::k1: return "k1";
        case Route::small_r: return "small_r";
        case Route::general: return "general";
        case Route::harman_pointwise: return "harman_pointwise";
    }
    return "?";
}

Route route_from_name(const std::string& name) {
    if (name == "auto") return Route::auto_select;
    if (name == "k1") return Route::k1;
    if (name == "small_r") return Route::small_r;
    if (name == "general") return Route::general;
    if (name == "harman_pointwise") return Route::harman_pointwise;
    throw ConfigError("unknown route '" + name + "'");
}

std::vector<std::string> ThetaSpec::validate(const WeightSpec& w) const {
    std::vector<std::string> warnings;
    if (theta1 <= 0.0 || theta1 >= 1.0) throw ConfigError("theta1 must lie in (0, 1)");
    const double t_lo = theta2(valid_lo);
    const double t_hi = theta2(valid_hi);
    if (std::min(t_lo, t_hi) < kThetaDelta) {
        std::ostringstream msg;
        msg << "theta2 drops below delta = " << kThetaDelta << " on the validity interval";
        throw ConfigError(msg.str());
    }
    if (std::max(t_lo, t_hi) >= 1.0) throw ConfigError("theta2 must stay below 1");
    if (theta1 < 1.0 / w.u + kThetaDelta) {
        std::ostringstream msg;
        msg << "theta1 = " << theta1 << " is below 1/u + delta = "
            << 1.0 / w.u + kThetaDelta << " (Assumption edge)";
        warnings.push_back(msg.str());
    }
    return warnings;
}

std::shared_ptr<const SieveTables> tables_for(const ThetaSpec& theta, const WeightSpec& w) {
    TableSettings s;
    s.s_max_ff = std::max(s.s_max_ff, std::ceil(theta.theta1 * w.v) + 1.0);
    s.s_max_omega = std::max(s.s_max_omega, std::ceil(w.v) + 1.0);
    return shared_tables(s);
}

bool sigma1_weight_integral_diverges(const ThetaSpec& theta, const WeightSpec& w) {
    if (w.window_empty()) return false;
    const double alpha_hi = 1.0 / w.u;
    if (theta.theta1 > alpha_hi + 1e-12) return false;
    if (theta.theta1 < alpha_hi - 1e-12) return true;
    // F's argument vanishes exactly at the window edge: integrable only when
    // the weight vanishes there at least linearly.
    return weight_value(w, alpha_hi - 1e-9) > 1e-6;
}

double sigma1_coeff(const ThetaSpec& theta, const WeightSpec& w, EvalContext ctx) {
    ensure_tables(theta, w, ctx);
    const double f_term = ctx.tables->linear_sieve_f(theta.theta1 * w.v);
    log_entry(ctx, "sigma1.f_term", f_term, 1e-8);
    double integral = 0.0;
    if (!w.window_empty()) {
        if (sigma1_weight_integral_diverges(theta, w)) {
            throw DomainError(
                "sigma1 weight integral diverges: theta1 <= 1/u on the weight window");
        }
        IntegralTask task = base_task(IntegrandId::sigma1_weight, theta, w, ctx);
        task.dimension = 1;
        task.lower = {1.0 / w.v};
        task.upper = {1.0 / w.u};
        task.tolerance = ctx.tolerance > 0 ? ctx.tolerance : default_tolerance(1);
        for (int k = 0; k <= static_cast<int>(theta.theta1 * w.v) + 1; ++k) {
            double knot = theta.theta1 - static_cast<double>(k) / w.v;
            if (knot > task.lower[0] && knot < task.upper[0]) task.split_points.push_back(knot);
        }
        auto t0 = std::chrono::steady_clock::now();
        IntegrateResult res = integrate(task, ctx.quad);
        double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                              t0)
                        .count();
        log_entry(ctx, "sigma1.weight_integral", res.value, res.error, ms);
        integral = res.value;
    }
    return kExpMinusGamma * w.v * (f_term - integral);
}

double u2_coeff_k1(const ThetaSpec& theta, const WeightSpec& w, int S, EvalContext ctx) {
    if (!k1_route_valid(w)) {
        throw RoutePreconditionError("k1 route requires an empty window or inf w >= 1/2");
    }
    if (w.u < S + 1 - 1e-12) {
        throw RoutePreconditionError("k1 route requires u >= S + 1");
    }
    ensure_tables(theta, w, ctx);
    const double tol = ctx.tolerance > 0 ? ctx.tolerance : default_tolerance(1);
    double total = 0.0;
    if (!w.window_empty()) {
        IntegralTask task = base_task(IntegrandId::m2_term, theta, w, ctx);
        task.params.S = S;
        task.params.J = 1;
        task.dimension = 1;
        task.lower = {1.0 / w.v};
        task.upper = {1.0 / w.u};
        task.tolerance = tol / 2;
        for (int k = 1; k <= static_cast<int>(w.u) + 1; ++k) {
            double knot = 1.0 - static_cast<double>(k) / w.u;  // C_S kink
            if (knot > task.lower[0] && knot < task.upper[0]) task.split_points.push_back(knot);
        }
        total += run_task(task, ctx, "u2.k1.window", nullptr);
    }
    IntegralTask tail = base_task(IntegrandId::m2_tail, theta, w, ctx);
    tail.params.S = S;
    tail.dimension = 1;
    tail.lower = {1.0 / w.u};
    tail.upper = {1.0 / (S + 1.0)};
    tail.tolerance = tol / 2;
    for (int k = S; k < 2 + static_cast<int>(w.u); ++k) {
        double knot = 1.0 / (k + 1.0);
        if (knot > tail.lower[0] && knot < tail.upper[0]) tail.split_points.push_back(knot);
    }
    total += run_task(tail, ctx, "u2.k1.tail", nullptr);
    return total;
}

double u2_coeff_small_r(const ThetaSpec& theta, const WeightSpec& w, int S, int R,
                        EvalContext ctx) {
    if (R - 1 > kMaxDim) {
        throw CapacityError("small_r route capped at R - 1 <= 6; use the general route");
    }
    if (R <= S) return 0.0;
    ensure_tables(theta, w, ctx);
    const int terms = R - S;
    const double tol_each =
        (ctx.tolerance > 0 ? ctx.tolerance : default_tolerance(R - 1)) / terms;
    double total = 0.0;
    for (int J = S + 1; J <= R; ++J) {
        const int d = J - 1;
        IntegralTask task = base_task(IntegrandId::u2_small_r_term, theta, w, ctx);
        task.params.S = S;
        task.params.J = J;
        task.dimension = d;
        task.ordered = true;
        task.lower.assign(d, 1.0 / w.v);
        task.upper.resize(d);
        for (int j = 0; j < d; ++j) task.upper[j] = ordered_cap(j, d, 1.0 / w.v);
        LinearConstraint budget;
        budget.coeffs.assign(d, 1.0);
        budget.coeffs[d - 1] = 2.0;  // sum + a_last <= 1
        budget.bound = 1.0;
        task.constraints.push_back(budget);
        task.tolerance = tol_each;
        std::ostringstream label;
        label << "u2.small_r.J" << J;
        total += run_task(task, ctx, label.str(), nullptr);
    }
    return total;
}

double u2_coeff_general(const ThetaSpec& theta, const WeightSpec& w, int S, int R0,
                        EvalContext ctx) {
    auto r0 = r_zero(w);
    if (!r0.has_value()) {
        throw RoutePreconditionError(
            "general route unavailable: inf w = 0 gives no window cutoff R0");
    }
    if (*r0 > R0) {
        throw RoutePreconditionError("general route requires r_zero(w) <= R0");
    }
    if (R0 - 1 > kMaxDim || R0 > kMaxDim) {
        throw CapacityError("general route J-sums capped at dimension 6");
    }
    ensure_tables(theta, w, ctx);
    const int terms = 1 + std::max(0, R0 - S) + R0;
    const double tol_each =
        (ctx.tolerance > 0 ? ctx.tolerance : default_tolerance(std::max(R0, 1))) / terms;
    double total = 0.0;

    IntegralTask tail = base_task(IntegrandId::m2_tail, theta, w, ctx);
    tail.params.S = S;
    tail.dimension = 1;
    tail.lower = {1.0 / w.u};
    tail.upper = {1.0 / (S + 1.0)};
    tail.tolerance = tol_each;
    for (int k = S; k < 2 + static_cast<int>(w.u); ++k) {
        double knot = 1.0 / (k + 1.0);
        if (knot > tail.lower[0] && knot < tail.upper[0]) tail.split_points.push_back(knot);
    }
    total += run_task(tail, ctx, "u2.general.m2_tail", nullptr);

    for (int J = S + 1; J <= R0; ++J) {  // M1
        const int d = J - 1;
        IntegralTask task = base_task(IntegrandId::m1_term, theta, w, ctx);
        task.params.S = S;
        task.params.J = J;
        task.dimension = d;
        task.ordered = true;
        task.lower.assign(d, 1.0 / w.v);
        task.upper.assign(d, 1.0 / w.u);
        LinearConstraint budget;
        budget.coeffs.assign(d, 1.0);
        budget.coeffs[d - 1] = 2.0;
        budget.bound = 1.0;
        task.constraints.push_back(budget);
        LinearConstraint floor_sum;  // sum >= 1 - 1/u
        floor_sum.coeffs.assign(d, -1.0);
        floor_sum.bound = -(1.0 - 1.0 / w.u);
        task.constraints.push_back(floor_sum);
        task.tolerance = tol_each;
        std::ostringstream label;
        label << "u2.general.m1.J" << J;
        total += run_task(task, ctx, label.str(), nullptr);
    }

    for (int J = 1; J <= R0; ++J) {  // M2 window terms
        const int d = J;
        IntegralTask task = base_task(IntegrandId::m2_term, theta, w, ctx);
        task.params.S = S;
        task.params.J = J;
        task.dimension = d;
        task.ordered = true;
        task.lower.assign(d, 1.0 / w.v);
        task.upper.assign(d, 1.0 / w.u);
        LinearConstraint cap;  // sum <= 1 - (S-J)/u
        cap.coeffs.assign(d, 1.0);
        cap.bound = 1.0 - static_cast<double>(S - J) / w.u;
        task.constraints.push_back(cap);
        task.tolerance = tol_each;
        if (d == 1) {
            for (int k = 1; k <= static_cast<int>(w.u) + 1; ++k) {
                double knot = 1.0 - static_cast<double>(k) / w.u;
                if (knot > task.lower[0] && knot < task.upper[0]) {
                    task.split_points.push_back(knot);
                }
            }
        }
        std::ostringstream label;
        label << "u2.general.m2.J" << J;
        total += run_task(task, ctx, label.str(), nullptr);
    }
    return total;
}

double harman_pointwise_u2(const ThetaSpec& theta, const WeightSpec& w, EvalContext ctx) {
    if (w.family != WeightFamily::richert) {
        throw RoutePreconditionError("harman_pointwise route requires Richert weights");
    }
    if (w.S != 3) {
        throw RoutePreconditionError("harman_pointwise route is fixed to S = 3 geometry");
    }
    ensure_tables(theta, w, ctx);
    IntegralTask task = base_task(IntegrandId::harman_pointwise, theta, w, ctx);
    task.params.constant = w.lambda;
    task.dimension = 3;
    task.ordered = true;
    task.lower.assign(3, 1.0 / w.v);
    task.upper.resize(3);
    for (int j = 0; j < 3; ++j) task.upper[j] = ordered_cap(j, 3, 1.0 / w.v);
    LinearConstraint budget;
    budget.coeffs = {1.0, 1.0, 2.0};
    budget.bound = 1.0;
    task.constraints.push_back(budget);
    task.tolerance = ctx.tolerance > 0 ? ctx.tolerance : default_tolerance(3);
    return run_task(task, ctx, "u2.harman_pointwise", nullptr);
}

double sigma2_coeff(double u2) {
    if (u2 < 0) throw DomainError("sigma2_coeff: negative switched-sum coefficient");
    return 2.0 * u2;
}

MarginReport margin(const ThetaSpec& theta, const WeightSpec& w, int S, Route route,
                    const MarginOptions& options) {
    MarginReport rep;
    rep.margin_tolerance = options.margin_tolerance;
    rep.warnings = theta.validate(w);

    Route resolved = route;
    if (route == Route::auto_select) {
        if (k1_route_valid(w) && w.u >= S + 1 - 1e-12) {
            resolved = Route::k1;
        } else if (capital_R(w) - 1 <= kMaxDim) {
            resolved = Route::small_r;
        } else {
            resolved = Route::general;
        }
    }
    rep.route = resolved;

    EvalContext ctx;
    ctx.tables = options.tables ? options.tables : tables_for(theta, w);
    ctx.quad = options.quad;
    ctx.log = &rep.per_integral;

    // error budget: sigma1 and 2*u2 each get margin_tolerance/40, keeping the
    // total comfortably under the margin_tolerance/10 reporting requirement
    const double mt = options.margin_tolerance;
    if (sigma1_weight_integral_diverges(theta, w)) {
        rep.sigma1 = kDivergentSigma1;
        rep.sigma1_divergent = true;
        rep.warnings.push_back(
            "sigma1 weight integral diverges (theta1 <= 1/u on the window); "
            "sigma1 reported as a large negative sentinel");
        rep.per_integral.push_back({"sigma1.weight_integral", kDivergentSigma1, 0.0});
    } else {
        ctx.tolerance = mt / (40.0 * kExpMinusGamma * w.v);
        rep.sigma1 = sigma1_coeff(theta, w, ctx);
    }

    ctx.tolerance = mt / 80.0;
    double u2 = 0.0;
    switch (resolved) {
        case Route::k1:
            u2 = u2_coeff_k1(theta, w, S, ctx);
            break;
        case Route::small_r:
            u2 = u2_coeff_small_r(theta, w, S, capital_R(w), ctx);
            break;
        case Route::general: {
            auto r0 = r_zero(w);
            if (!r0.has_value()) {
                throw RoutePreconditionError("general route unavailable for this weight");
            }
            u2 = u2_coeff_general(theta, w, S, *r0, ctx);
            break;
        }
        case Route::harman_pointwise:
            u2 = harman_pointwise_u2(theta, w, ctx);
            break;
        case Route::auto_select:
            break;  // unreachable
    }
    rep.sigma2 = sigma2_coeff(u2);
    rep.margin = rep.sigma1 - rep.sigma2;

    StableSum err;
    for (const auto& e : rep.per_integral) {
        double scale = e.label.rfind("sigma1.", 0) == 0 ? kExpMinusGamma * w.v : 2.0;
        err.add(scale * e.error);
    }
    rep.total_quad_error = err.get();
    rep.admissible = !rep.sigma1_divergent && rep.margin >= rep.margin_tolerance &&
                     rep.total_quad_error < rep.margin_tolerance / 10.0;
    return rep;
}

}  // namespace wsieve
