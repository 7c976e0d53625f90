#pragma once

#include <memory>
#include <string>
#include <vector>

#include "wsieve/quad.hpp"
#include "wsieve/special_functions.hpp"
#include "wsieve/weights.hpp"

namespace wsieve {

inline constexpr double kThetaDelta = 0.01;
// Stand-in for a divergent sigma1 (kept finite so reports round-trip JSON).
inline constexpr double kDivergentSigma1 = -1e300;

// Levels of distribution: theta1 for the direct problem and the affine
// theta2(a) = c0 + c1*a for the switched one, valid on [1/v, 1/(S+1)].
struct ThetaSpec {
    double theta1 = 0.0;
    double theta2_c0 = 0.0;
    double theta2_c1 = 0.0;
    double valid_lo = 0.0;
    double valid_hi = 0.0;

    double theta2(double alpha) const { return theta2_c0 + theta2_c1 * alpha; }
    // Hard errors for unusable theta2; warnings for soft Assumption violations.
    std::vector<std::string> validate(const WeightSpec& w) const;
};

enum class Route { auto_select, k1, small_r, general, harman_pointwise };
const char* route_name(Route r);
Route route_from_name(const std::string& name);

struct IntegralEntry {
    std::string label;
    double value = 0.0;
    double error = 0.0;
    double elapsed_ms = 0.0;
};

struct MarginReport {
    double sigma1 = 0.0;
    double sigma2 = 0.0;
    double margin = 0.0;
    Route route = Route::auto_select;
    std::vector<IntegralEntry> per_integral;
    bool admissible = false;
    double margin_tolerance = 0.0;
    double total_quad_error = 0.0;
    bool sigma1_divergent = false;
    std::vector<std::string> warnings;
};

// Shared evaluation knobs for the coefficient routines. tables may be null,
// in which case a bundle sized for the spec at hand is fetched from the
// process cache. tolerance == 0 picks the dimension defaults.
struct EvalContext {
    std::shared_ptr<const SieveTables> tables;
    QuadOptions quad;
    double tolerance = 0.0;
    std::vector<IntegralEntry>* log = nullptr;
};

// True iff the sigma1 weight integral int w(a)/a F(v(theta1-a)) da diverges
// because F's argument reaches 0 inside the closed support of w.
bool sigma1_weight_integral_diverges(const ThetaSpec& theta, const WeightSpec& w);

// e^{-gamma} v (f(theta1 v) - int_{1/v}^{1/u} w(a)/a F(v(theta1-a)) da).
double sigma1_coeff(const ThetaSpec& theta, const WeightSpec& w, EvalContext ctx = {});

// Switched-sum main-term coefficient, single-window-prime route (u >= S+1).
double u2_coeff_k1(const ThetaSpec& theta, const WeightSpec& w, int S, EvalContext ctx = {});

// Sum over J = S+1..R of (J-1)-fold ordered integrals.
double u2_coeff_small_r(const ThetaSpec& theta, const WeightSpec& w, int S, int R,
                        EvalContext ctx = {});

// M1 + M2 route for weights with few admissible window primes.
double u2_coeff_general(const ThetaSpec& theta, const WeightSpec& w, int S, int R0,
                        EvalContext ctx = {});

// Historical pointwise-bound route (Richert weights, S = 3 geometry).
double harman_pointwise_u2(const ThetaSpec& theta, const WeightSpec& w, EvalContext ctx = {});

double sigma2_coeff(double u2);

struct MarginOptions {
    double margin_tolerance = 1e-3;
    std::shared_ptr<const SieveTables> tables;
    QuadOptions quad;
};

MarginReport margin(const ThetaSpec& theta, const WeightSpec& w, int S, Route route,
                    const MarginOptions& options = {});

// Table bundle sized so every evaluation a margin run needs stays in range.
std::shared_ptr<const SieveTables> tables_for(const ThetaSpec& theta, const WeightSpec& w);

}  // namespace wsieve
