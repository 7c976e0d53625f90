#pragma once

#include <memory>
#include <vector>

#include "wsieve/function_table.hpp"

namespace wsieve {

struct TableSettings {
    double grid_step = 1e-3;     // pre: in [1e-5, 1e-2]
    double s_max_ff = 12.0;      // f and F
    double s_max_omega = 30.0;   // omega_B, c_j, C_J
    int j_max = 8;
    double refine_sup_tol = 1e-8;
    int max_refinements = 8;
};

// The tabulated special functions of the sieve machinery:
//
//   omega_B : 0 on [0,1), 1/u on [1,2], (u w(u))' = w(u-1) above
//   c_1     = 1_{t>=1},  c_j'(t) = c_{j-1}(t-1)/(t-1) for t > j, c_j = 0 below
//   C_J(t)  = t*omega_B(t) - sum_{j<J} c_j(t), clamped at 0
//   f, F    : s F(s) = 2 e^gamma on (0,3], s f(s) = 0 on (0,2],
//             (s F(s))' = f(s-1) for s > 3, (s f(s))' = F(s-1) for s > 2
//
// Tables hold u*omega_B, s*f, s*F and c_j; construction marches panel by
// panel with 3-point Gauss, then halves the step until the sup-norm change
// stabilizes. Instances are immutable after construction and safe to share
// across threads.
class SieveTables {
public:
    explicit SieveTables(TableSettings settings = {});

    double buchstab(double u) const;
    double little_c(int j, double t) const;
    double big_C(int J, double t) const;
    double linear_sieve_f(double s) const;
    double linear_sieve_F(double s) const;

    // Sampled snapshot of one function (C_J assembled from its parts).
    FunctionTable make_table(FnKind kind, int index_j = 0) const;

    const TableSettings& settings() const { return settings_; }
    int refinement_level() const { return refinement_level_; }
    double s_max(FnKind kind) const;

private:
    double big_C_raw(int J, double t) const;

    TableSettings settings_;
    int refinement_level_ = 0;
    FunctionTable omega_;           // u * omega_B(u)
    FunctionTable lil_;             // s * f(s)
    FunctionTable big_;             // s * F(s)
    std::vector<FunctionTable> cj_; // c_j, j = 2..j_max (c_1 is analytic)
};

// Spec-level entry point: builds (with refinement) just the requested kind.
FunctionTable tabulate(FnKind kind, int index_j, double s_max, double grid_step);

// Process-wide cache of table bundles keyed by settings; margin evaluations
// share one bundle instead of re-marching per call.
std::shared_ptr<const SieveTables> shared_tables(const TableSettings& settings = {});

}  // namespace wsieve
