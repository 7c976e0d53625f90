#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wsieve/bounds.hpp"

namespace wsieve {

enum class ScenarioKind { diophantine, constant_lod, custom };
const char* scenario_kind_name(ScenarioKind k);
ScenarioKind scenario_kind_from_name(const std::string& name);

// One full problem instance. For the diophantine scenario theta1 = 1/3 - rho
// and theta2(a) = (1-a)/2 - rho; constant_lod uses theta1 = theta2 = theta.
struct ScenarioConfig {
    ScenarioKind kind = ScenarioKind::constant_lod;
    double rho = 0.0;    // diophantine
    double theta = 0.0;  // constant_lod
    double custom_theta1 = 0.0;
    double custom_theta2_c0 = 0.0;
    double custom_theta2_c1 = 0.0;
    WeightSpec weight;
    int S = 3;
    Route route = Route::auto_select;
    double margin_tolerance = 1e-3;
    QuadOptions quad;

    void validate() const;
};

ThetaSpec build_theta(const ScenarioConfig& config);
MarginReport run_margin(const ScenarioConfig& config);

struct SweepPoint {
    double rho = 0.0;
    double sigma1 = 0.0;
    double sigma2 = 0.0;
    double margin = 0.0;
};

// Margin as a function of rho for a diophantine-shaped scenario. Accepts rho
// beyond the scenario invariant (the bracket checks need rho = 0.2) by
// building the theta spec directly.
std::vector<SweepPoint> rho_sweep(const WeightSpec& weight, int S, Route route,
                                  const std::vector<double>& rhos,
                                  const MarginOptions& options = {});

struct RhoSearchSettings {
    WeightFamily family = WeightFamily::kuhn;
    int S = 3;
    double u_min = 0, u_max = 0, u_step = 0.1;
    double v_min = 0, v_max = 0, v_step = 0.1;
    double lambda_min = 0, lambda_max = 0, lambda_step = 0.1;  // richert only
    double rho_min = 1e-3, rho_max = 0.1999;
    double rho_grid = 1e-3;
    double rho_bisect_tol = 1e-4;
    int refine_passes = 1;  // coordinate refinement at halved parameter steps
    Route route = Route::auto_select;
    double margin_tolerance = 1e-3;
    QuadOptions quad;
};

struct RhoSearchResult {
    bool found = false;
    double rho_star = 0.0;
    WeightSpec best_weight;
    MarginReport report;
    double best_margin_seen = -1e300;
};

// Largest admissible rho over the parameter lattice (deterministic; ties by
// lexicographic (rho, u, v, lambda)).
RhoSearchResult max_admissible_rho(const RhoSearchSettings& settings);

struct ThetaSearchResult {
    bool found = false;
    double theta_star = 0.0;
    MarginReport report;
    double best_margin_seen = -1e300;
};

// Smallest admissible constant level of distribution, bisected to 1e-4.
ThetaSearchResult min_admissible_theta(const WeightSpec& weight, int S,
                                       const MarginOptions& options = {},
                                       double bisect_tol = 1e-4);

struct ReproduceRun {
    std::string label;
    ScenarioConfig config;
    MarginReport report;
};

struct ReproduceCase {
    std::string id;
    std::vector<ReproduceRun> runs;
    bool all_admissible = false;
};

const std::vector<std::string>& reproduce_case_ids();
ReproduceCase reproduce(const std::string& case_id, const QuadOptions& quad = {});

}  // namespace wsieve
