#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "wsieve/polytope.hpp"
#include "wsieve/special_functions.hpp"
#include "wsieve/weights.hpp"

namespace wsieve {

// Which integrand a task evaluates. The u2 / sigma1 family is parameterized by
// IntegrandParams; the first three exist for direct engine checks.
enum class IntegrandId {
    unit,                  // 1
    coordinate,            // x_0
    affine_positive_part,  // max(c0 + c.x, 0)
    sigma1_weight,         // w(a)/a * F(v*(theta1 - a)),                 d = 1
    u2_small_r_term,       // (1 - sum w - w(1-sum))^+ / (th2(a1) prod a (1-sum))
    m1_term,               // same integrand, window-interior region
    m2_term,               // (1 - sum w)^+ C_{S+1-J}(u(1-sum)) / (th2 prod (1-sum))
    m2_tail,               // C_S((1-a)/a) / (th2(a) a (1-a)),            d = 1
    harman_pointwise,      // lambda / (th2(a1) a1 a2 a3 (1-sum)),        d = 3
};

struct AffineForm {
    double c0 = 0.0;
    Vec c{};
};

struct LinearConstraint {
    std::vector<double> coeffs;  // size == dimension
    double bound = 0.0;          // coeffs . x <= bound
};

struct IntegrandParams {
    std::optional<WeightSpec> weight;
    double theta2_c0 = 0.0, theta2_c1 = 0.0;  // theta2(a) = c0 + c1 * a
    double theta1 = 0.0;                      // sigma1_weight only
    int S = 0;
    int J = 0;
    std::shared_ptr<const SieveTables> tables;
    AffineForm affine;       // affine_positive_part
    double constant = 1.0;   // harman_pointwise numerator
};

struct IntegralTask {
    int dimension = 1;
    std::vector<double> lower, upper;  // bounding box, one entry per variable
    bool ordered = false;              // require x_1 < x_2 < ... < x_d
    std::vector<LinearConstraint> constraints;
    IntegrandId integrand = IntegrandId::unit;
    IntegrandParams params;
    double tolerance = 1e-6;
    std::vector<double> split_points;  // extra 1-d pre-splits (kink abscissae)
};

struct QuadOptions {
    int threads = 0;                  // 0 = hardware concurrency
    long cell_budget = 10'000'000;
    // When false, skips the analytic weight-membership case split and
    // integrates the raw kinked integrand with corner-sign forced splitting.
    bool analytic_kink_splits = true;
};

struct IntegrateResult {
    double value = 0.0;
    double error = 0.0;
    long cells = 0;
};

// Deterministic adaptive cubature over the task's constraint polytope.
// Result is independent of options.threads.
IntegrateResult integrate(const IntegralTask& task, const QuadOptions& options = {});

struct McResult {
    double value = 0.0;
    double std_error = 0.0;
    double acceptance_rate = 0.0;
    bool degenerate_region = false;
};

// Uniform-rejection Monte Carlo oracle over the task's bounding box;
// reproducible for a fixed seed.
McResult mc_integrate(const IntegralTask& task, long samples, uint64_t seed);

// Default tolerances per the margin-stability calibration.
double default_tolerance(int dimension);

}  // namespace wsieve
