#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace wsieve {

enum class WeightFamily { trivial, kuhn, richert, piecewise_linear };

const char* weight_family_name(WeightFamily f);
WeightFamily weight_family_from_name(const std::string& name);

// The weight w(alpha) attached to window primes p = x^alpha, supported on
// [1/v, 1/u). Immutable value type.
struct WeightSpec {
    WeightFamily family = WeightFamily::trivial;
    double u = 0.0;
    double v = 0.0;
    double lambda = 0.0;                                // richert only
    std::vector<std::pair<double, double>> breakpoints; // piecewise_linear: (alpha, w)
    double lipschitz_bound = 0.0;
    int S = 3;

    static WeightSpec trivial(double v, int S = 3);
    static WeightSpec kuhn(double u, double v, int S = 3);
    static WeightSpec richert(double u, double v, double lambda, int S = 3);
    static WeightSpec piecewise_linear(double u, double v,
                                       std::vector<std::pair<double, double>> pts, int S = 3);

    void validate() const;
    bool window_empty() const { return v <= u * (1 + 1e-14); }
};

// w(alpha); total on [0,1], zero outside [1/v, 1/u).
double weight_value(const WeightSpec& spec, double alpha);

// Smallest R for which the positivity cutoff assumption is guaranteed by the
// family's formula (piecewise_linear falls back to ceil(v-1)).
int capital_R(const WeightSpec& spec);

// Smallest R0 with (R0+1) * inf{w on window} >= 1, or nullopt when inf w = 0.
std::optional<int> r_zero(const WeightSpec& spec);

// True iff only a single window prime can keep the weight positive (empty
// window, or inf w >= 1/2).
bool k1_route_valid(const WeightSpec& spec);

// Piecewise-affine description of w used by the quadrature layer's analytic
// kink splitting: sorted breakpoints covering [0, 1]; on each segment
// [pts[k], pts[k+1]] the weight is c0 + c1*alpha.
struct WeightSegments {
    std::vector<double> pts;
    std::vector<std::pair<double, double>> affine;  // size pts.size()-1
    int segment_of(double alpha) const;
};
WeightSegments weight_segments(const WeightSpec& spec);

}  // namespace wsieve
